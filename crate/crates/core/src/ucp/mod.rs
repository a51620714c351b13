//! Unique-continuation machinery: half-space covers of convex lattice sets,
//! degree certificates for the adjugate expansion of `H^D(x) − t`, the
//! pairing identity, and finite-box numeric null tests.

pub mod degree;
pub mod halfspace;
pub mod nulltest;

pub use degree::{degree_certificate_float, degree_certificate_rational, DegreeReport, XiDegrees};
pub use halfspace::{halfspace_cover, HalfSpace, LatticeBox};
pub use nulltest::{finite_box_null_test, NullTestConfig, NullTestReport, Verdict};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::lattice::{LatticeField, PerturbedMedia, Site};
use crate::rational::Q;
use crate::trigpoly::{Coeff, Direction, GRat, TrigPoly};
use crate::{Error, Result};

/// Aggregate certificate emitted by the CLI: any subset of the three
/// reports, plus the overall validity flag.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UcpCertificate {
    pub lambda: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_report: Option<DegreeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<Vec<HalfSpace>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nulltest: Option<NullTestReport>,
    pub valid: bool,
}

/// Report of the pairing identity `N_ξ^max(T) = 2 N_ξ^max(u)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairingReport {
    pub n_u: f64,
    pub n_t: f64,
    pub holds: bool,
}

/// `N_ξ^max` of a lattice field: max of `ξ·n` over the site support.
pub fn nmax_field(u: &LatticeField, xi: &Direction) -> Option<f64> {
    u.iter()
        .map(|(s, _)| xi.dot(s))
        .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
}

/// The pairing `T(x) = Σ_{n,m} ⟨D̂_p⁻¹(n) conj(û(n)), û(m)⟩ e^{i(n+m)·x}`;
/// its diagonal part carries the positive weights `D̂_p⁻¹(n)|û(n)|²` at
/// frequency `2n`, so the top face in any direction survives.
pub fn pairing_poly(u: &LatticeField, pm: &PerturbedMedia) -> TrigPoly<Complex64> {
    let mut t = TrigPoly::zero();
    for (n, un) in u.iter() {
        let dinv = pm.d_at(n).map(|d| 1.0 / d);
        for (m, um) in u.iter() {
            let mut coeff = Complex64::ZERO;
            for j in 0..6 {
                coeff += dinv[j] * un[j].conj() * um[j];
            }
            let freq = [n[0] + m[0], n[1] + m[1], n[2] + m[2]];
            t = t.add(&TrigPoly::term(freq, coeff));
        }
    }
    t
}

/// Exact-mode pairing for Gaussian-rational field values and a rational
/// `D̂_p⁻¹` diagonal.
pub fn pairing_poly_exact(
    u: &[(Site, [GRat; 6])],
    d_inv_diag: &dyn Fn(&Site) -> [Q; 6],
) -> TrigPoly<GRat> {
    let mut t = TrigPoly::zero();
    for (n, un) in u {
        let dinv = d_inv_diag(n);
        for (m, um) in u {
            let mut coeff = GRat::zero();
            for j in 0..6 {
                let w = GRat::real(dinv[j].clone());
                coeff = coeff.add(&w.mul(&un[j].conj()).mul(&um[j]));
            }
            let freq = [n[0] + m[0], n[1] + m[1], n[2] + m[2]];
            t = t.add(&TrigPoly::term(freq, coeff));
        }
    }
    t
}

/// Check `N_ξ^max(T) = 2 N_ξ^max(u)` for a finitely supported nonzero field.
pub fn pairing_identity(
    u: &LatticeField,
    pm: &PerturbedMedia,
    xi: &Direction,
) -> Result<PairingReport> {
    if u.is_zero() {
        return Err(Error::Precondition("pairing identity needs a nonzero field".into()));
    }
    let n_u = nmax_field(u, xi).expect("nonzero field");
    let t = pairing_poly(u, pm);
    let n_t = t.nmax(xi).ok_or_else(|| {
        Error::Internal("pairing polynomial vanished for a nonzero field".into())
    })?;
    let holds = (n_t - 2.0 * n_u).abs() <= 1e-12 * (1.0 + n_u.abs());
    Ok(PairingReport { n_u, n_t, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::Media;
    use crate::rational::qi;
    use num_rational::Rational64;
    use rand::prelude::*;

    #[test]
    fn pairing_of_origin_delta_is_constant() {
        let u = LatticeField::delta([0, 0, 0], 0);
        let pm = PerturbedMedia::unperturbed(Media::isotropic());
        let xi = Direction::new([1.0, 0.0, 0.0]).unwrap();
        let rep = pairing_identity(&u, &pm, &xi).unwrap();
        assert_eq!(rep.n_u, 0.0);
        assert_eq!(rep.n_t, 0.0);
        assert!(rep.holds);
    }

    #[test]
    fn pairing_of_shifted_delta() {
        let u = LatticeField::delta([1, 0, 0], 0);
        let pm = PerturbedMedia::unperturbed(Media::isotropic());
        let xi = Direction::new([1.0, 0.0, 0.0]).unwrap();
        let rep = pairing_identity(&u, &pm, &xi).unwrap();
        assert_eq!(rep.n_u, 1.0);
        assert_eq!(rep.n_t, 2.0);
        assert!(rep.holds);
        // the top coefficient at 2e₁ is the positive weight D⁻¹|û(e₁)|²
        let t = pairing_poly(&u, &pm);
        let c = t.coeff(&[2, 0, 0]);
        assert!(c.re > 0.0 && c.im.abs() < 1e-15);
    }

    #[test]
    fn pairing_identity_random_two_site_fields() {
        let mut rng = StdRng::seed_from_u64(6);
        let pm = PerturbedMedia::unperturbed(Media::new([1.0, 2.0, 1.0], [1.0; 3]).unwrap())
            .with_site([0, 0, 0], [3.0, 1.0, 2.0], [1.0, 4.0, 1.0])
            .unwrap();
        let xi = Direction::new([1.0, 0.0, 0.0]).unwrap();
        for _ in 0..50 {
            let mut u = LatticeField::new();
            u.set(
                [0, 0, 0],
                std::array::from_fn(|_| {
                    num_complex::Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                }),
            );
            u.set(
                [1, 0, 0],
                std::array::from_fn(|_| {
                    num_complex::Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                }),
            );
            let rep = pairing_identity(&u, &pm, &xi).unwrap();
            assert!(rep.holds, "N(T) = {}, N(u) = {}", rep.n_t, rep.n_u);
        }
    }

    #[test]
    fn pairing_exact_mode() {
        // u supported on {0, e₁} with Gaussian-rational values
        let sites = vec![
            (
                [0, 0, 0],
                std::array::from_fn(|i| GRat::from_ratio(i as i64 + 1, 3, -1, 2)),
            ),
            (
                [1, 0, 0],
                std::array::from_fn(|i| GRat::from_ratio(2 - i as i64, 5, 1, 7)),
            ),
        ];
        let dinv = |_: &Site| -> [Q; 6] { std::array::from_fn(|i| qi(1) / qi(i as i64 + 1)) };
        let t = pairing_poly_exact(&sites, &dinv);
        let xi = [
            Rational64::new(1, 1),
            Rational64::new(0, 1),
            Rational64::new(0, 1),
        ];
        assert_eq!(t.nmax_rat(&xi), Some(Rational64::new(2, 1)));
    }
}
