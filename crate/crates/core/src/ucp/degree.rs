//! Degree certificates for the adjugate expansion of `H^D(x) − t`.
//!
//! With `L_t = adj(H^D(x) − t)` and `q_t = det(H^D(x) − t)`, the certified
//! facts are: `L₀ = 0` (the symbol has rank ≤ 4), the expansion
//! `L_t = t B₁ + t² B₂(t)` with `B₁ H₀ = 0`, and the directional degrees
//!
//! ```text
//! N_ξ^max(q_λ) = N_ξ^max(L_λ) = N_ξ^max(B₁) = 4|ξ|_∞ > 3|ξ|_∞ ≥ N_ξ^max(B₂)
//! ```
//!
//! for every `ξ ∈ G*` and `λ ≠ 0`. In rational mode every statement is
//! exact; in float mode supports are decided at `1e-12` relative pruning.

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::media::Media;
use crate::rational::{MediaQ, Q};
use crate::trigpoly::{
    rat_in_gstar, rat_linf, Coeff, Direction, GRat, PolyMat, RatDirection, TPoly, TrigPoly,
};
use crate::{Error, Result};

/// Degrees measured for one direction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct XiDegrees {
    pub xi: [f64; 3],
    pub in_gstar: bool,
    /// `4|ξ|_∞`, the expected common value.
    pub expected: f64,
    pub n_q: Option<f64>,
    pub n_l: Option<f64>,
    pub n_b1: Option<f64>,
    pub n_b2: Option<f64>,
    pub holds: bool,
}

/// Full certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegreeReport {
    pub lambda: f64,
    pub mode: String,
    /// `adj(H^D − t)` vanishes at `t = 0`.
    pub l0_zero: bool,
    /// `B₁ H₀ = 0` as a polynomial identity.
    pub b1_h0_zero: bool,
    /// `(H^D − t) L_t = q_t I` over the polynomial ring.
    pub adjugate_identity: bool,
    pub per_xi: Vec<XiDegrees>,
    pub valid: bool,
}

/// `6×6` matrix `H^D(x) − t` over trigonometric polynomials with
/// `t`-polynomial coefficients; entries of the ring are supplied as the
/// diagonal media values.
fn hd_minus_t<C: Coeff>(eps: &[C; 3], mu: &[C; 3]) -> PolyMat<TPoly<C>> {
    let y: Vec<TrigPoly<TPoly<C>>> = (0..3).map(TrigPoly::sin).collect();
    // M̃(y) entry table: m[i][j] = (sign, axis) of ±y_axis, or None
    let mt: [[Option<(i8, usize)>; 3]; 3] = [
        [None, Some((-1, 2)), Some((1, 1))],
        [Some((1, 2)), None, Some((-1, 0))],
        [Some((-1, 1)), Some((1, 0)), None],
    ];
    let mut m = PolyMat::zeros(6, 6);
    for i in 0..3 {
        for j in 0..3 {
            if let Some((sign, axis)) = mt[i][j] {
                let base = if sign > 0 { y[axis].clone() } else { y[axis].neg() };
                m[(i, j + 3)] = base.scale(&TPoly::constant(eps[i].clone()));
                m[(i + 3, j)] = base.scale(&TPoly::constant(mu[i].clone())).neg();
            }
        }
    }
    let t = TrigPoly::constant(TPoly::t());
    for d in 0..6 {
        m[(d, d)] = m[(d, d)].sub(&t);
    }
    m
}

/// `H₀(x)` over scalar coefficients.
fn h0_matrix<C: Coeff>() -> PolyMat<C> {
    let one = [C::one(), C::one(), C::one()];
    let with_t = hd_minus_t::<C>(&one, &one);
    let mut m = PolyMat::zeros(6, 6);
    for i in 0..6 {
        for j in 0..6 {
            m[(i, j)] = with_t[(i, j)].t_coeff(0);
        }
    }
    m
}

struct Expansion<C: Coeff> {
    q_t: TrigPoly<TPoly<C>>,
    l_t: PolyMat<TPoly<C>>,
    b1: PolyMat<C>,
    b2: PolyMat<TPoly<C>>,
    l0_zero: bool,
    b1_h0_zero: bool,
    adjugate_identity: bool,
}

fn expand<C: Coeff>(eps: &[C; 3], mu: &[C; 3], prune: Option<f64>) -> Result<Expansion<C>> {
    let hd = hd_minus_t(eps, mu);
    let q_t = hd.det()?;
    let l_t = hd.adjugate()?;

    let maybe_pruned = |p: &TrigPoly<TPoly<C>>| -> TrigPoly<TPoly<C>> {
        let mut q = p.clone();
        if let Some(rel) = prune {
            q.prune(rel);
        }
        q
    };

    // (H^D − t) L_t = q_t I
    let prod = hd.matmul(&l_t)?;
    let mut adjugate_identity = true;
    for i in 0..6 {
        for j in 0..6 {
            let expect = if i == j { q_t.clone() } else { TrigPoly::zero() };
            let diff = maybe_pruned(&prod[(i, j)].sub(&expect));
            if !diff.is_zero() {
                adjugate_identity = false;
            }
        }
    }

    // L₀ = 0 and the expansion pieces
    let mut l0_zero = true;
    let mut b1 = PolyMat::zeros(6, 6);
    let mut b2 = PolyMat::zeros(6, 6);
    for i in 0..6 {
        for j in 0..6 {
            if !maybe_pruned(&l_t[(i, j)]).t_coeff(0).is_zero() {
                l0_zero = false;
            }
            b1[(i, j)] = l_t[(i, j)].t_coeff(1);
            b2[(i, j)] = l_t[(i, j)].t_shift_down(2);
        }
    }

    // B₁ H₀ = 0
    let h0 = h0_matrix::<C>();
    let prod = b1.matmul(&h0)?;
    let mut b1_h0_zero = true;
    for i in 0..6 {
        for j in 0..6 {
            let mut e = prod[(i, j)].clone();
            if let Some(rel) = prune {
                e.prune(rel);
            }
            if !e.is_zero() {
                b1_h0_zero = false;
            }
        }
    }

    Ok(Expansion { q_t, l_t, b1, b2, l0_zero, b1_h0_zero, adjugate_identity })
}

/// Max `N_ξ^max` over all entries of a matrix polynomial.
fn nmax_mat_rat<C: Coeff>(
    m: &PolyMat<C>,
    xi: &RatDirection,
    to_support: impl Fn(&TrigPoly<C>) -> TrigPoly<C>,
) -> Option<Rational64> {
    let mut best: Option<Rational64> = None;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if let Some(v) = to_support(&m[(i, j)]).nmax_rat(xi) {
                best = Some(best.map_or(v, |b| b.max(v)));
            }
        }
    }
    best
}

fn rat_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Exact certificate for rational media at a rational level `λ ≠ 0`.
pub fn degree_certificate_rational(
    media: &MediaQ,
    lambda: Q,
    xis: &[RatDirection],
) -> Result<DegreeReport> {
    use num_traits::{ToPrimitive, Zero};
    if lambda.is_zero() {
        return Err(Error::Domain("degree certificate requires λ ≠ 0".into()));
    }
    media.validate()?;
    let eps: [GRat; 3] = std::array::from_fn(|i| GRat::real(media.eps[i].clone()));
    let mu: [GRat; 3] = std::array::from_fn(|i| GRat::real(media.mu[i].clone()));
    let ex = expand(&eps, &mu, None)?;
    let lam = GRat::real(lambda.clone());

    let q_lambda = ex.q_t.subst_t(&lam);
    let l_lambda_entries: Vec<TrigPoly<GRat>> = {
        let mut v = Vec::with_capacity(36);
        for i in 0..6 {
            for j in 0..6 {
                v.push(ex.l_t[(i, j)].subst_t(&lam));
            }
        }
        v
    };

    let mut per_xi = Vec::new();
    let mut all_hold = true;
    for xi in xis {
        let in_g = rat_in_gstar(xi);
        let expected = Rational64::from_integer(4) * rat_linf(xi);
        let b2_bound = Rational64::from_integer(3) * rat_linf(xi);
        let n_q = q_lambda.nmax_rat(xi);
        let n_l = l_lambda_entries
            .iter()
            .filter_map(|p| p.nmax_rat(xi))
            .max();
        let n_b1 = nmax_mat_rat(&ex.b1, xi, |p| p.clone());
        let n_b2 = nmax_mat_rat(&ex.b2, xi, |p| p.clone());
        let holds = in_g
            && n_q == Some(expected)
            && n_l == Some(expected)
            && n_b1 == Some(expected)
            && n_b2.map_or(true, |v| v <= b2_bound);
        all_hold &= holds;
        per_xi.push(XiDegrees {
            xi: std::array::from_fn(|i| rat_to_f64(xi[i])),
            in_gstar: in_g,
            expected: rat_to_f64(expected),
            n_q: n_q.map(rat_to_f64),
            n_l: n_l.map(rat_to_f64),
            n_b1: n_b1.map(rat_to_f64),
            n_b2: n_b2.map(rat_to_f64),
            holds,
        });
    }

    let valid = ex.l0_zero && ex.b1_h0_zero && ex.adjugate_identity && all_hold;
    Ok(DegreeReport {
        lambda: lambda.to_f64().unwrap_or(f64::NAN),
        mode: "rational".into(),
        l0_zero: ex.l0_zero,
        b1_h0_zero: ex.b1_h0_zero,
        adjugate_identity: ex.adjugate_identity,
        per_xi,
        valid,
    })
}

/// Float-mode pruning threshold for support decisions.
pub const FLOAT_SUPPORT_PRUNE: f64 = 1e-12;

/// Float-mode certificate for arbitrary media.
pub fn degree_certificate_float(
    media: &Media,
    lambda: f64,
    xis: &[Direction],
) -> Result<DegreeReport> {
    if lambda == 0.0 {
        return Err(Error::Domain("degree certificate requires λ ≠ 0".into()));
    }
    media.validate()?;
    let eps: [Complex64; 3] = std::array::from_fn(|i| Complex64::new(media.eps[i], 0.0));
    let mu: [Complex64; 3] = std::array::from_fn(|i| Complex64::new(media.mu[i], 0.0));
    let ex = expand(&eps, &mu, Some(FLOAT_SUPPORT_PRUNE))?;
    let lam = Complex64::new(lambda, 0.0);

    let prune = |mut p: TrigPoly<Complex64>| {
        p.prune(FLOAT_SUPPORT_PRUNE);
        p
    };
    let q_lambda = prune(ex.q_t.subst_t(&lam));
    let mut l_entries = Vec::with_capacity(36);
    let mut b1_entries = Vec::with_capacity(36);
    let mut b2_supports = Vec::with_capacity(36);
    for i in 0..6 {
        for j in 0..6 {
            l_entries.push(prune(ex.l_t[(i, j)].subst_t(&lam)));
            b1_entries.push(prune(ex.b1[(i, j)].clone()));
            // union support of B₂ over all t-degrees
            let mut united = TrigPoly::zero();
            for f in ex.b2[(i, j)].support_from_degree(0) {
                united = united.add(&TrigPoly::term(f, Complex64::ONE));
            }
            b2_supports.push(united);
        }
    }

    let mut per_xi = Vec::new();
    let mut all_hold = true;
    let close = |a: Option<f64>, b: f64| a.map_or(false, |v| (v - b).abs() <= 1e-9 * (1.0 + b.abs()));
    for xi in xis {
        let in_g = xi.in_gstar();
        let expected = 4.0 * xi.linf();
        let b2_bound = 3.0 * xi.linf();
        let n_q = q_lambda.nmax(xi);
        let n_l = l_entries.iter().filter_map(|p| p.nmax(xi)).fold(None, fmax_opt);
        let n_b1 = b1_entries.iter().filter_map(|p| p.nmax(xi)).fold(None, fmax_opt);
        let n_b2 = b2_supports.iter().filter_map(|p| p.nmax(xi)).fold(None, fmax_opt);
        let holds = in_g
            && close(n_q, expected)
            && close(n_l, expected)
            && close(n_b1, expected)
            && n_b2.map_or(true, |v| v <= b2_bound + 1e-9);
        all_hold &= holds;
        per_xi.push(XiDegrees {
            xi: xi.xi,
            in_gstar: in_g,
            expected,
            n_q,
            n_l,
            n_b1,
            n_b2,
            holds,
        });
    }

    let valid = ex.l0_zero && ex.b1_h0_zero && ex.adjugate_identity && all_hold;
    Ok(DegreeReport {
        lambda,
        mode: "float".into(),
        l0_zero: ex.l0_zero,
        b1_h0_zero: ex.b1_h0_zero,
        adjugate_identity: ex.adjugate_identity,
        per_xi,
        valid,
    })
}

fn fmax_opt(acc: Option<f64>, v: f64) -> Option<f64> {
    Some(acc.map_or(v, |a| a.max(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use num_rational::Rational64;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn m3q() -> MediaQ {
        MediaQ::from_ints([1, 2, 1], [1, 1, 1]).unwrap()
    }

    #[test]
    fn m3_axis_direction_exact() {
        let xi = [r(1, 1), r(0, 1), r(0, 1)];
        let rep = degree_certificate_rational(&m3q(), qi(2), &[xi]).unwrap();
        assert!(rep.l0_zero);
        assert!(rep.b1_h0_zero);
        assert!(rep.adjugate_identity);
        let d = &rep.per_xi[0];
        assert_eq!(d.n_q, Some(4.0));
        assert_eq!(d.n_l, Some(4.0));
        assert_eq!(d.n_b1, Some(4.0));
        assert!(d.n_b2.unwrap() <= 3.0);
        assert!(rep.valid);
    }

    #[test]
    fn m3_fractional_direction_exact() {
        let xi = [r(1, 1), r(1, 2), r(1, 4)];
        let rep = degree_certificate_rational(&m3q(), qi(1), &[xi]).unwrap();
        assert!(rep.valid);
        assert_eq!(rep.per_xi[0].n_q, Some(4.0));
    }

    #[test]
    fn rejects_zero_lambda() {
        assert!(degree_certificate_rational(&m3q(), qi(0), &[[r(1, 1), r(0, 1), r(0, 1)]]).is_err());
    }

    #[test]
    fn float_mode_matches_rational_for_m3() {
        let media = Media::new([1.0, 2.0, 1.0], [1.0; 3]).unwrap();
        let xi = Direction::new([1.0, 0.5, 0.25]).unwrap();
        let rep = degree_certificate_float(&media, 2.0, &[xi]).unwrap();
        assert!(rep.valid, "{rep:?}");
        assert_eq!(rep.per_xi[0].n_q, Some(4.0));
    }

    #[test]
    fn float_mode_irrational_media() {
        let media = Media::new([1.0, std::f64::consts::SQRT_2, 0.7], [1.3, 1.0, 2.1]).unwrap();
        let xi = Direction::new([-1.0, 0.5, 0.0]).unwrap();
        let rep = degree_certificate_float(&media, 1.0, &[xi]).unwrap();
        assert!(rep.valid, "{rep:?}");
    }

    #[test]
    fn non_gstar_direction_reported_invalid() {
        let xi = [r(1, 1), r(1, 1), r(0, 1)];
        let rep = degree_certificate_rational(&m3q(), qi(2), &[xi]).unwrap();
        assert!(!rep.per_xi[0].in_gstar);
        assert!(!rep.valid);
    }
}
