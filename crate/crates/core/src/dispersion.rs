//! Closed-form dispersion quantities and the quadric model of the Fermi
//! variety in the variable `z = sin² x`.
//!
//! The determinant of the fiber symbol factorizes as
//!
//! ```text
//! det(H^D(x) − λ) = p(z; λ) = λ² (τ⁺(z) − λ²)(τ⁻(z) − λ²),
//! τ^±(z) = Ψ₀(z) ± √K₀(z),   Ψ₀ = α·z,
//! K₀(z) = ¼ Σ (β_i z_i)² − ½ Σ_{i<j} β_i β_j z_i z_j,
//! ```
//!
//! and `p(z;λ)/λ² = A z·z + b·z + c` with the symmetric matrix `A` below,
//! `b = −2λ²α`, `c = λ⁴`.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::media::{derive_params, normalize_a0, DerivedParams, Media, MediaClass};
use crate::symbol;
use crate::{Error, Result};

/// Grid used for the λ₋ fallback maximum on `[0,1]³`.
pub const LAMBDA_GRID_N: usize = 201;

/// Relative agreement required between closed-form and grid λ values.
pub const LAMBDA_GRID_TOL: f64 = 5e-3;

pub fn psi0(p: &DerivedParams, z: &[f64; 3]) -> f64 {
    p.alpha[0] * z[0] + p.alpha[1] * z[1] + p.alpha[2] * z[2]
}

pub fn k0(p: &DerivedParams, z: &[f64; 3]) -> f64 {
    let b = &p.beta;
    0.25 * ((b[0] * z[0]).powi(2) + (b[1] * z[1]).powi(2) + (b[2] * z[2]).powi(2))
        - 0.5
            * (b[0] * b[1] * z[0] * z[1]
                + b[0] * b[2] * z[0] * z[2]
                + b[1] * b[2] * z[1] * z[2])
}

/// Both dispersion branches `τ^± = Ψ₀ ± √K₀` at a real `z ∈ [0,∞)³`.
pub fn tau_pm(p: &DerivedParams, z: &[f64; 3]) -> Result<(f64, f64)> {
    if z.iter().any(|v| *v < 0.0) {
        return Err(Error::Domain(format!("τ± requires z ≥ 0, got {z:?}")));
    }
    let psi = psi0(p, z);
    let mut k = k0(p, z);
    if k < 0.0 {
        // K₀ ≥ 0 on the positive octant; tiny negatives are roundoff.
        let scale = p.beta.iter().map(|b| b * b).sum::<f64>() * z.iter().map(|v| v * v).sum::<f64>();
        if k < -1e-12 * scale.max(1e-300) {
            return Err(Error::Internal(format!("K₀ = {k} < 0 at z = {z:?}")));
        }
        k = 0.0;
    }
    let s = k.sqrt();
    Ok((psi + s, psi - s))
}

/// `p(z; λ)` at real `z`, in the square-root-free form
/// `λ²(λ⁴ − 2λ²Ψ₀ + Ψ₀² − K₀)`.
pub fn p_eval(p: &DerivedParams, z: &[f64; 3], lambda: f64) -> f64 {
    let psi = psi0(p, z);
    let l2 = lambda * lambda;
    l2 * (l2 * l2 - 2.0 * l2 * psi + psi * psi - k0(p, z))
}

/// `p(z; λ)` at complex `z` (no square roots taken).
pub fn p_eval_complex(p: &DerivedParams, z: &[Complex64; 3], lambda: Complex64) -> Complex64 {
    let psi = p.alpha[0] * z[0] + p.alpha[1] * z[1] + p.alpha[2] * z[2];
    let b = &p.beta;
    let k = (z[0] * b[0] * z[0] * b[0] + z[1] * b[1] * z[1] * b[1] + z[2] * b[2] * z[2] * b[2]) * 0.25
        - (z[0] * z[1] * (b[0] * b[1]) + z[0] * z[2] * (b[0] * b[2]) + z[1] * z[2] * (b[1] * b[2])) * 0.5;
    let l2 = lambda * lambda;
    l2 * (l2 * l2 - l2 * 2.0 * psi + psi * psi - k)
}

/// Extremal spectral levels `λ± = max_{[0,1]³} √τ±`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LambdaExtrema {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// Maximizer of τ⁺ (always the corner `(1,1,1)`).
    pub argmax_plus: [f64; 3],
    /// Maximizer of τ⁻ among the two candidate corners.
    pub argmax_minus: [f64; 3],
    /// Dense-grid maxima of √τ± on `[0,1]³` (cross-check).
    pub grid_plus: f64,
    pub grid_minus: f64,
    /// Whether closed form and grid agree to [`LAMBDA_GRID_TOL`].
    pub grid_agrees: bool,
}

/// Closed-form λ± with a dense-grid cross-check.
///
/// For `β ≠ 0` the closed form for λ₋ presumes the `(A0)` orientation, so the
/// media is normalized internally; λ± themselves are invariant under the
/// normalization. Disagreement with the grid is reported, not fatal.
pub fn lambda_extrema(media: &Media) -> Result<LambdaExtrema> {
    let params = derive_params(media)?;
    let params_n = if params.class == MediaClass::B0 {
        params
    } else {
        derive_params(&normalize_a0(media)?.media)?
    };

    let ones = [1.0, 1.0, 1.0];
    let edge = [1.0, 1.0, 0.0];
    let (tp_ones, tm_ones) = tau_pm(&params_n, &ones)?;
    let (_, tm_edge) = tau_pm(&params_n, &edge)?;
    let lambda_plus = tp_ones.sqrt();
    let (lm_sq, argmax_minus) = if tm_ones >= tm_edge { (tm_ones, ones) } else { (tm_edge, edge) };
    let lambda_minus = lm_sq.sqrt();

    let (grid_plus_sq, grid_minus_sq) = grid_max_tau(&params_n, LAMBDA_GRID_N);
    let grid_plus = grid_plus_sq.sqrt();
    let grid_minus = grid_minus_sq.sqrt();
    let grid_agrees = (grid_plus - lambda_plus).abs() <= LAMBDA_GRID_TOL * lambda_plus
        && (grid_minus - lambda_minus).abs() <= LAMBDA_GRID_TOL * lambda_minus;

    Ok(LambdaExtrema {
        lambda_plus,
        lambda_minus,
        argmax_plus: ones,
        argmax_minus,
        grid_plus,
        grid_minus,
        grid_agrees,
    })
}

/// Max of `τ±` over a uniform grid on `[0,1]³`.
fn grid_max_tau(p: &DerivedParams, n: usize) -> (f64, f64) {
    let h = 1.0 / (n - 1) as f64;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let z1 = i as f64 * h;
            let mut mp = f64::NEG_INFINITY;
            let mut mm = f64::NEG_INFINITY;
            for j in 0..n {
                let z2 = j as f64 * h;
                for k in 0..n {
                    let z = [z1, z2, k as f64 * h];
                    let psi = psi0(p, &z);
                    let s = k0(p, &z).max(0.0).sqrt();
                    mp = mp.max(psi + s);
                    mm = mm.max(psi - s);
                }
            }
            (mp, mm)
        })
        .reduce(
            || (f64::NEG_INFINITY, f64::NEG_INFINITY),
            |a, b| (a.0.max(b.0), a.1.max(b.1)),
        )
}

/// Branch tag of the quadric classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadricCase {
    /// `A = 0`, `b ≠ 0`: a regular hyperplane (does not occur for media-derived
    /// quadrics, where `tr A > 0`).
    #[serde(rename = "plane")]
    Plane,
    /// `b ∉ Im A`: the variety is regular and connected (class `B₃`).
    #[serde(rename = "regular-connected")]
    RegularConnected,
    /// `b ∈ Im A`, `c ≠ c*`: regular, possibly two sheets (does not occur
    /// here: `c* = c` always holds for media-derived quadrics).
    #[serde(rename = "regular-offset")]
    RegularOffset,
    /// `b ∈ Im A`, `c = c*`, rank 1: the singular set is a plane (class `B₀`).
    #[serde(rename = "singular-plane")]
    SingularPlane,
    /// `b ∈ Im A`, `c = c*`, rank 2: two sheets meeting along a line
    /// (class `B₁₂`).
    #[serde(rename = "two-sheets-singular-line")]
    TwoSheetsSingularLine,
}

/// The quadric `A z·z + b·z + c` for `p(·;λ)/λ²`, with its exact structure.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadricModel {
    pub a: [[f64; 3]; 3],
    pub b: [f64; 3],
    pub c: f64,
    /// Rank of `A` (from the structure lemmas, cross-checked numerically).
    pub rank: usize,
    /// Positive-inertia index of `A`.
    pub signature_pos: usize,
    pub b_in_im_a: bool,
    /// Solution of `A z⁰ = −b/2` in `Im A`, when `b ∈ Im A`.
    pub z0: Option<[f64; 3]>,
    /// `A z⁰ · z⁰` (equals `c` for media-derived quadrics).
    pub c_star: Option<f64>,
    /// `z*` with `A z* = α` for `B₁₂` media (`z⁰ = λ² z*`).
    pub z_star: Option<[f64; 3]>,
    pub case: QuadricCase,
}

/// The symmetric matrix `A` of the quadric.
pub fn a_matrix(media: &Media) -> Result<Matrix3<f64>> {
    let p = derive_params(media)?;
    let e = media.eps;
    let u = media.mu;
    let w = [
        e[0] * u[0] * p.alpha[0],
        e[1] * u[1] * p.alpha[1],
        e[2] * u[2] * p.alpha[2],
    ];
    Ok(Matrix3::new(
        p.gamma[0], w[2], w[1], //
        w[2], p.gamma[1], w[0], //
        w[1], w[0], p.gamma[2],
    ))
}

/// Build the quadric model at level `λ ≠ 0`.
///
/// Rank and signature come from the exact structure of `A` (`β = 0` gives
/// `A = ααᵀ` of rank one; otherwise rank two with `ker A = span(g)` and
/// signature `(1,1)`), cross-checked by a numeric eigensolve.
pub fn quadric_model(media: &Media, lambda: f64) -> Result<QuadricModel> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::Domain("quadric model requires λ ≠ 0".into()));
    }
    let p = derive_params(media)?;
    let a = a_matrix(media)?;
    let l2 = lambda * lambda;
    let alpha = Vector3::from(p.alpha);
    let b = -2.0 * l2 * alpha;
    let c = l2 * l2;

    let (rank, sig_pos) = match p.class {
        MediaClass::B0 => (1usize, 1usize),
        _ => (2, 1),
    };
    numeric_rank_check(&a, rank, sig_pos)?;

    let b_in_im_a = p.class != MediaClass::B3;
    let (z0, c_star, z_star) = match p.class {
        MediaClass::B0 => {
            let nrm2 = alpha.norm_squared();
            let z0 = alpha * (l2 / nrm2);
            let c_star = (a * z0).dot(&z0);
            (Some([z0[0], z0[1], z0[2]]), Some(c_star), None)
        }
        MediaClass::B12 => {
            // z* = e_i / √γ_i at the unique zero-β slot; z⁰ = λ² z*.
            let i = p.beta.iter().position(|b| *b == 0.0).ok_or_else(|| {
                Error::Internal("B12 media without a zero β component".into())
            })?;
            let mut zs = [0.0; 3];
            zs[i] = 1.0 / p.gamma[i].sqrt();
            let z0 = [l2 * zs[0], l2 * zs[1], l2 * zs[2]];
            let z0v = Vector3::from(z0);
            let c_star = (a * z0v).dot(&z0v);
            (Some(z0), Some(c_star), Some(zs))
        }
        MediaClass::B3 => (None, None, None),
    };

    let case = match p.class {
        MediaClass::B3 => QuadricCase::RegularConnected,
        MediaClass::B0 => QuadricCase::SingularPlane,
        MediaClass::B12 => QuadricCase::TwoSheetsSingularLine,
    };

    Ok(QuadricModel {
        a: [
            [a[(0, 0)], a[(0, 1)], a[(0, 2)]],
            [a[(1, 0)], a[(1, 1)], a[(1, 2)]],
            [a[(2, 0)], a[(2, 1)], a[(2, 2)]],
        ],
        b: [b[0], b[1], b[2]],
        c,
        rank,
        signature_pos: sig_pos,
        b_in_im_a,
        z0,
        c_star,
        z_star,
        case,
    })
}

/// Cross-check the structural rank/signature against a numeric eigensolve.
fn numeric_rank_check(a: &Matrix3<f64>, rank: usize, sig_pos: usize) -> Result<()> {
    let ev = a.symmetric_eigenvalues();
    let radius = ev.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let pos = ev.iter().filter(|v| **v > 1e-10 * radius).count();
    let neg = ev.iter().filter(|v| **v < -1e-10 * radius).count();
    if pos + neg != rank || pos != sig_pos {
        return Err(Error::Internal(format!(
            "numeric inertia ({pos},{neg}) disagrees with structural rank {rank}, signature {sig_pos}"
        )));
    }
    Ok(())
}

/// Histogram summary of grid eigenvalues of `H^D`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub grid: usize,
    pub lambda_plus: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// Largest gap between consecutive sorted grid eigenvalues.
    pub max_gap: f64,
    /// Histogram counts over [-λ₊, λ₊].
    pub bins: Vec<u64>,
    pub bin_edges: (f64, f64),
    /// Zero belongs to the spectrum at every grid point (flat band).
    pub flat_band_everywhere: bool,
}

/// Scan an `N³` torus grid, collecting all fiber eigenvalues.
pub fn spectrum_summary(media: &Media, n: usize, nbins: usize) -> Result<SpectrumSummary> {
    if n < 16 {
        return Err(Error::GridTooSmall { needed: 16, got: n });
    }
    let ext = lambda_extrema(media)?;
    let h = std::f64::consts::TAU / n as f64;
    let results: Vec<(Vec<f64>, bool)> = (0..n)
        .into_par_iter()
        .map(|i1| {
            let mut evs = Vec::with_capacity(6 * n * n);
            let mut flat = true;
            for i2 in 0..n {
                for i3 in 0..n {
                    let y = nalgebra::Vector3::new(
                        (i1 as f64 * h).sin(),
                        (i2 as f64 * h).sin(),
                        (i3 as f64 * h).sin(),
                    );
                    let ev = symbol::hd_eigenvalues(media, &y);
                    let zero_mult = ev.iter().filter(|v| v.abs() < 1e-9 * (1.0 + ext.lambda_plus)).count();
                    if zero_mult < 2 {
                        flat = false;
                    }
                    evs.extend_from_slice(&ev);
                }
            }
            (evs, flat)
        })
        .collect();

    let mut all: Vec<f64> = Vec::with_capacity(6 * n * n * n);
    let mut flat_band_everywhere = true;
    for (evs, flat) in results {
        all.extend(evs);
        flat_band_everywhere &= flat;
    }
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let min_eigenvalue = all[0];
    let max_eigenvalue = *all.last().unwrap();
    let max_gap = all.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);

    let lo = -ext.lambda_plus;
    let hi = ext.lambda_plus;
    let mut bins = vec![0u64; nbins];
    for v in &all {
        let t = ((v - lo) / (hi - lo) * nbins as f64).floor();
        let idx = (t as isize).clamp(0, nbins as isize - 1) as usize;
        bins[idx] += 1;
    }

    Ok(SpectrumSummary {
        grid: n,
        lambda_plus: ext.lambda_plus,
        min_eigenvalue,
        max_eigenvalue,
        max_gap,
        bins,
        bin_edges: (lo, hi),
        flat_band_everywhere,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;

    fn m3() -> Media {
        Media::new([1.0, 2.0, 1.0], [1.0, 1.0, 1.0]).unwrap()
    }

    fn m2() -> Media {
        Media::new([1.0, 2.0, 3.0], [1.0, 1.0, 1.0]).unwrap()
    }

    #[test]
    fn isotropic_forms() {
        let p = derive_params(&Media::isotropic()).unwrap();
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..50 {
            let z = [rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()];
            assert_eq!(k0(&p, &z), 0.0);
            let (tp, tm) = tau_pm(&p, &z).unwrap();
            let s = z[0] + z[1] + z[2];
            assert_abs_diff_eq!(tp, s, epsilon = 1e-14);
            assert_abs_diff_eq!(tm, s, epsilon = 1e-14);
        }
    }

    #[test]
    fn m3_worked_values() {
        let p = derive_params(&m3()).unwrap();
        let z = [1.0, 1.0, 0.0];
        assert_abs_diff_eq!(k0(&p, &z), 0.25, epsilon = 1e-15);
        let (tp, tm) = tau_pm(&p, &z).unwrap();
        assert_abs_diff_eq!(tp, 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(tm, 2.0, epsilon = 1e-14);
        // τ± are the linear forms 2z₁+z₂+2z₃ and z₁+z₂+z₃ on [0,1]³
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..200 {
            let z = [rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()];
            let (tp, tm) = tau_pm(&p, &z).unwrap();
            let lp = 2.0 * z[0] + z[1] + 2.0 * z[2];
            let lm = z[0] + z[1] + z[2];
            assert!((tp - lp).abs() <= 1e-12 * (1.0 + lp));
            assert!((tm - lm).abs() <= 1e-12 * (1.0 + lm));
        }
    }

    #[test]
    fn tau_rejects_negative_z() {
        let p = derive_params(&m3()).unwrap();
        assert!(tau_pm(&p, &[-0.1, 0.0, 0.0]).is_err());
    }

    #[test]
    fn lambda_extrema_isotropic() {
        let ext = lambda_extrema(&Media::isotropic()).unwrap();
        assert_abs_diff_eq!(ext.lambda_plus, 3f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(ext.lambda_minus, 3f64.sqrt(), epsilon = 1e-12);
        assert!(ext.grid_agrees);
    }

    #[test]
    fn lambda_extrema_m3() {
        let ext = lambda_extrema(&m3()).unwrap();
        assert_abs_diff_eq!(ext.lambda_plus, 5f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(ext.lambda_minus, 3f64.sqrt(), epsilon = 1e-12);
        assert!(ext.grid_agrees);
    }

    #[test]
    fn lambda_extrema_m2_grid_check() {
        let ext = lambda_extrema(&m2()).unwrap();
        assert!(ext.grid_agrees);
        assert!((ext.lambda_plus - ext.grid_plus).abs() <= 5e-3 * ext.lambda_plus);
    }

    #[test]
    fn p_matches_tau_factorization() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..300 {
            let media = Media {
                eps: std::array::from_fn(|_| rng.random_range(0.1..10.0)),
                mu: std::array::from_fn(|_| rng.random_range(0.1..10.0)),
            };
            let p = derive_params(&media).unwrap();
            let z = [rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()];
            let lambda = rng.random_range(-3.0..3.0);
            let (tp, tm) = tau_pm(&p, &z).unwrap();
            let l2 = lambda * lambda;
            let expect = l2 * (tp - l2) * (tm - l2);
            let got = p_eval(&p, &z, lambda);
            let scale = l2 * (tp.abs() + l2) * (tm.abs() + l2);
            assert!((got - expect).abs() <= 1e-9 * scale.max(1.0));
        }
    }

    #[test]
    fn p_matches_symbol_determinant() {
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..200 {
            let media = Media {
                eps: std::array::from_fn(|_| rng.random_range(0.1..10.0)),
                mu: std::array::from_fn(|_| rng.random_range(0.1..10.0)),
            };
            let p = derive_params(&media).unwrap();
            let x = [
                rng.random_range(0.0..6.28),
                rng.random_range(0.0..6.28),
                rng.random_range(0.0..6.28),
            ];
            let lambda = rng.random_range(-3.0..3.0);
            let z = symbol::z_of_x(&x);
            let hd = symbol::hd_symbol(&media, &x);
            let shifted = hd - nalgebra::Matrix6::identity() * lambda;
            let det = shifted.determinant();
            let expect = p_eval(&p, &z, lambda);
            let scale = det.abs().max(expect.abs()).max(1.0);
            assert!((det - expect).abs() <= 1e-9 * scale, "det {det} vs p {expect}");
        }
    }

    #[test]
    fn quadric_b0_case() {
        let media = Media::isotropic();
        let q = quadric_model(&media, 1.3).unwrap();
        assert_eq!(q.case, QuadricCase::SingularPlane);
        assert_eq!(q.rank, 1);
        assert!(q.b_in_im_a);
        let l2 = 1.3f64 * 1.3;
        let p = derive_params(&media).unwrap();
        let nrm2: f64 = p.alpha.iter().map(|a| a * a).sum();
        let z0 = q.z0.unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(z0[i], l2 * p.alpha[i] / nrm2, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(q.c_star.unwrap(), q.c, epsilon = 1e-9);
    }

    #[test]
    fn quadric_b3_case() {
        let q = quadric_model(&m2(), 1.0).unwrap();
        assert_eq!(q.case, QuadricCase::RegularConnected);
        assert!(!q.b_in_im_a);
        assert_eq!(q.rank, 2);
        assert!(q.z0.is_none());
    }

    #[test]
    fn quadric_b12_case_m3() {
        let q = quadric_model(&m3(), 2.0).unwrap();
        assert_eq!(q.case, QuadricCase::TwoSheetsSingularLine);
        assert_eq!(q.rank, 2);
        assert_eq!(q.signature_pos, 1);
        let zs = q.z_star.unwrap();
        assert_eq!(zs, [0.0, 1.0, 0.0]);
        let z0 = q.z0.unwrap();
        assert_eq!(z0, [0.0, 4.0, 0.0]);
        assert_abs_diff_eq!(q.c_star.unwrap(), 16.0, epsilon = 1e-10);
        // α·z* = 1
        let p = derive_params(&m3()).unwrap();
        let dot: f64 = p.alpha.iter().zip(&zs).map(|(a, z)| a * z).sum();
        assert_abs_diff_eq!(dot, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn quadric_rejects_zero_lambda() {
        assert!(quadric_model(&m3(), 0.0).is_err());
    }

    #[test]
    fn a_matrix_spectral_identities() {
        // det A = 0, tr A = Σγ, Σ_{i<j} a_i a_j = −|g|²/4
        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..1000 {
            let media = Media {
                eps: std::array::from_fn(|_| rng.random_range(0.1..10.0)),
                mu: std::array::from_fn(|_| rng.random_range(0.1..10.0)),
            };
            let p = derive_params(&media).unwrap();
            let a = a_matrix(&media).unwrap();
            let tr = a.trace();
            let tr2 = (a * a).trace();
            let e2 = 0.5 * (tr * tr - tr2);
            let det = a.determinant();
            let gsq: f64 = p.g.iter().map(|v| v * v).sum();
            let scale = tr * tr;
            assert!(det.abs() <= 1e-10 * scale * tr.max(1.0), "det {det}");
            let gamma_sum: f64 = p.gamma.iter().sum();
            assert!((tr - gamma_sum).abs() <= 1e-12 * scale.max(1.0));
            assert!((e2 + gsq / 4.0).abs() <= 1e-10 * scale.max(1.0), "e2 {e2} vs {}", -gsq / 4.0);
        }
    }

    #[test]
    fn b12_z0_solves_restricted_system() {
        // A z⁰ = −b/2 = λ²α for B12 media in (A0) orientation
        let q = quadric_model(&m3(), 0.5).unwrap();
        let a = a_matrix(&m3()).unwrap();
        let p = derive_params(&m3()).unwrap();
        let z0 = Vector3::from(q.z0.unwrap());
        let rhs = Vector3::from(p.alpha) * 0.25;
        assert!((a * z0 - rhs).norm() < 1e-12);
    }

    #[test]
    fn spectrum_summary_isotropic() {
        let s = spectrum_summary(&Media::isotropic(), 16, 40).unwrap();
        assert!(s.flat_band_everywhere);
        assert!(s.max_eigenvalue <= s.lambda_plus + 1e-9);
        assert!(s.min_eigenvalue >= -s.lambda_plus - 1e-9);
    }
}
