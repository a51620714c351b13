//! Material parameters and everything derived from the pair `(ε, μ)`.
//!
//! All quantities follow the cyclic index convention: for `(i, j, k)` running
//! over the cyclic permutations of `(1, 2, 3)`,
//!
//! ```text
//! β  = ε × μ,            α_i = (ε_j μ_k + ε_k μ_j) / 2,
//! γ_i = ε_j ε_k μ_j μ_k,  g_i = ε_i μ_i β_i.
//! ```
//!
//! The class of the pair is decided by the sign pattern of `β`:
//! `B₀` (β = 0), `B₃` (β₁β₂β₃ ≠ 0), and `B₁₂` otherwise.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative snap threshold: β components this close to zero (relative to
/// `max |β|`) are treated as exact zeros before classification, because the
/// downstream case analysis branches on exact zeros.
pub const BETA_SNAP_REL: f64 = 1e-14;

/// Constant diagonal permittivity/permeability pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Media {
    #[serde(rename = "epsilon")]
    pub eps: [f64; 3],
    pub mu: [f64; 3],
}

/// Sign-pattern class of `β = ε × μ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MediaClass {
    B0,
    B3,
    B12,
}

impl std::fmt::Display for MediaClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MediaClass::B0 => write!(f, "B0"),
            MediaClass::B3 => write!(f, "B3"),
            MediaClass::B12 => write!(f, "B12"),
        }
    }
}

/// All scalar/vector quantities derived from a media pair.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DerivedParams {
    pub beta: [f64; 3],
    pub alpha: [f64; 3],
    pub gamma: [f64; 3],
    pub g: [f64; 3],
    pub class: MediaClass,
}

/// A media pair together with the transformation that brought it into the
/// `(A0)` orientation: `β₁ ≥ β₂ > 0 > β₃` or `β₁ > β₂ = 0 > β₃`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct NormalizedMedia {
    pub media: Media,
    /// Axis permutation: new axis `i` carries old axis `permutation[i]`.
    pub permutation: [usize; 3],
    /// Whether `ε` and `μ` were exchanged (this flips `β`).
    pub swapped: bool,
}

impl Media {
    pub fn new(eps: [f64; 3], mu: [f64; 3]) -> Result<Self> {
        let m = Self { eps, mu };
        m.validate()?;
        Ok(m)
    }

    pub fn isotropic() -> Self {
        Self { eps: [1.0; 3], mu: [1.0; 3] }
    }

    pub fn validate(&self) -> Result<()> {
        for v in self.eps.iter().chain(self.mu.iter()) {
            if !v.is_finite() || *v <= 0.0 {
                return Err(Error::InvalidMedia(format!(
                    "components must be finite and positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Apply an axis permutation (and optional ε↔μ swap) to the pair.
    pub fn transformed(&self, permutation: [usize; 3], swapped: bool) -> Media {
        let (a, b) = if swapped { (self.mu, self.eps) } else { (self.eps, self.mu) };
        Media {
            eps: [a[permutation[0]], a[permutation[1]], a[permutation[2]]],
            mu: [b[permutation[0]], b[permutation[1]], b[permutation[2]]],
        }
    }
}

/// `β = ε × μ` without snapping.
fn beta_raw(m: &Media) -> [f64; 3] {
    let e = m.eps;
    let u = m.mu;
    [
        e[1] * u[2] - e[2] * u[1],
        e[2] * u[0] - e[0] * u[2],
        e[0] * u[1] - e[1] * u[0],
    ]
}

/// Classify a snapped β vector.
fn classify(beta: &[f64; 3]) -> MediaClass {
    if *beta == [0.0; 3] {
        MediaClass::B0
    } else if beta.iter().all(|b| *b != 0.0) {
        MediaClass::B3
    } else {
        MediaClass::B12
    }
}

/// Compute all derived parameters.
pub fn derive_params(media: &Media) -> Result<DerivedParams> {
    media.validate()?;
    let e = media.eps;
    let u = media.mu;
    let mut beta = beta_raw(media);
    let bmax = beta.iter().fold(0.0f64, |m, b| m.max(b.abs()));
    for b in beta.iter_mut() {
        if b.abs() <= BETA_SNAP_REL * bmax {
            *b = 0.0;
        }
    }
    let alpha = [
        (e[1] * u[2] + e[2] * u[1]) / 2.0,
        (e[2] * u[0] + e[0] * u[2]) / 2.0,
        (e[0] * u[1] + e[1] * u[0]) / 2.0,
    ];
    let gamma = [
        e[1] * e[2] * u[1] * u[2],
        e[2] * e[0] * u[2] * u[0],
        e[0] * e[1] * u[0] * u[1],
    ];
    let g = [
        e[0] * u[0] * beta[0],
        e[1] * u[1] * beta[1],
        e[2] * u[2] * beta[2],
    ];
    Ok(DerivedParams { beta, alpha, gamma, g, class: classify(&beta) })
}

/// Does a β vector satisfy the `(A0)` sign pattern?
pub fn beta_is_a0(beta: &[f64; 3]) -> bool {
    (beta[0] >= beta[1] && beta[1] > 0.0 && beta[2] < 0.0)
        || (beta[0] > beta[1] && beta[1] == 0.0 && beta[2] < 0.0)
}

/// Bring a media pair into the `(A0)` orientation by searching all six axis
/// permutations combined with the optional ε↔μ exchange, recomputing β from
/// the transformed pair each time.
pub fn normalize_a0(media: &Media) -> Result<NormalizedMedia> {
    let params = derive_params(media)?;
    if params.class == MediaClass::B0 {
        return Err(Error::NotApplicable {
            class: "B0",
            reason: "β = 0 has no (A0) orientation".into(),
        });
    }
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [1, 2, 0],
        [2, 0, 1],
        [0, 2, 1],
        [2, 1, 0],
        [1, 0, 2],
    ];
    for swapped in [false, true] {
        for perm in PERMS {
            let cand = media.transformed(perm, swapped);
            let p = derive_params(&cand)?;
            if beta_is_a0(&p.beta) {
                return Ok(NormalizedMedia { media: cand, permutation: perm, swapped });
            }
        }
    }
    Err(Error::Internal(
        "no permutation/swap reaches (A0); unreachable for β ≠ 0".into(),
    ))
}

impl NormalizedMedia {
    /// Map a torus point of the normalized frame back to the original frame.
    /// (The ε↔μ exchange does not move `x`.)
    pub fn x_to_original(&self, x: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[self.permutation[i]] = x[i];
        }
        out
    }

    /// Map a torus point of the original frame into the normalized frame.
    pub fn x_from_original(&self, x: [f64; 3]) -> [f64; 3] {
        [
            x[self.permutation[0]],
            x[self.permutation[1]],
            x[self.permutation[2]],
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;

    #[test]
    fn isotropic_identity_case() {
        let p = derive_params(&Media::isotropic()).unwrap();
        assert_eq!(p.beta, [0.0; 3]);
        assert_eq!(p.alpha, [1.0; 3]);
        assert_eq!(p.gamma, [1.0; 3]);
        assert_eq!(p.class, MediaClass::B0);
    }

    #[test]
    fn hand_evaluated_b3_case() {
        let m = Media::new([1.0, 2.0, 3.0], [1.0, 1.0, 1.0]).unwrap();
        let p = derive_params(&m).unwrap();
        assert_eq!(p.beta, [-1.0, 2.0, -1.0]);
        assert_eq!(p.alpha, [2.5, 2.0, 1.5]);
        assert_eq!(p.gamma, [6.0, 3.0, 2.0]);
        assert_eq!(p.g, [-1.0, 4.0, -3.0]);
        assert_eq!(p.class, MediaClass::B3);
        // α·g = β₁β₂β₃/2
        let dot: f64 = p.alpha.iter().zip(&p.g).map(|(a, g)| a * g).sum();
        assert_abs_diff_eq!(dot, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn hand_evaluated_b12_case() {
        let m = Media::new([1.0, 2.0, 1.0], [1.0, 1.0, 1.0]).unwrap();
        let p = derive_params(&m).unwrap();
        assert_eq!(p.beta, [1.0, 0.0, -1.0]);
        assert_eq!(p.alpha, [1.5, 1.0, 1.5]);
        assert_eq!(p.gamma, [2.0, 1.0, 2.0]);
        assert_eq!(p.class, MediaClass::B12);
        assert!(beta_is_a0(&p.beta));
    }

    #[test]
    fn rejects_nonpositive_components() {
        assert!(Media::new([1.0, 0.0, 1.0], [1.0; 3]).is_err());
        assert!(Media::new([1.0, -2.0, 1.0], [1.0; 3]).is_err());
        assert!(derive_params(&Media { eps: [1.0, f64::NAN, 1.0], mu: [1.0; 3] }).is_err());
    }

    #[test]
    fn normalize_permutes_into_a0() {
        // β = (0, −1, 1): needs a permutation
        let m = Media::new([2.0, 1.0, 1.0], [1.0, 1.0, 1.0]).unwrap();
        let norm = normalize_a0(&m).unwrap();
        let p = derive_params(&norm.media).unwrap();
        assert!(beta_is_a0(&p.beta));
        assert_eq!(norm.media.eps, [1.0, 2.0, 1.0]);
        assert_eq!(norm.media.mu, [1.0, 1.0, 1.0]);
        assert_eq!(p.beta, [1.0, 0.0, -1.0]);
    }

    #[test]
    fn normalize_is_identity_on_a0_media() {
        let m = Media::new([1.0, 2.0, 1.0], [1.0, 1.0, 1.0]).unwrap();
        let norm = normalize_a0(&m).unwrap();
        assert_eq!(norm.permutation, [0, 1, 2]);
        assert!(!norm.swapped);
        assert_eq!(norm.media, m);
    }

    #[test]
    fn normalize_b3_with_swap_or_permutation() {
        // β of input is (1, −2, 1), the negation of the B3 example's β
        let m = Media::new([1.0, 1.0, 1.0], [1.0, 2.0, 3.0]).unwrap();
        let norm = normalize_a0(&m).unwrap();
        let p = derive_params(&norm.media).unwrap();
        assert!(beta_is_a0(&p.beta));
    }

    #[test]
    fn normalize_rejects_b0() {
        let err = normalize_a0(&Media::isotropic()).unwrap_err();
        assert!(matches!(err, Error::NotApplicable { class: "B0", .. }));
    }

    #[test]
    fn x_roundtrip_through_normalization() {
        let m = Media::new([2.0, 1.0, 1.0], [1.0, 1.0, 1.0]).unwrap();
        let norm = normalize_a0(&m).unwrap();
        let x = [0.3, 1.2, 2.9];
        let back = norm.x_to_original(norm.x_from_original(x));
        assert_eq!(back, x);
    }

    #[test]
    fn random_media_identities_and_class_invariance() {
        let mut rng = StdRng::seed_from_u64(42);
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [1, 2, 0],
            [2, 0, 1],
            [0, 2, 1],
            [2, 1, 0],
            [1, 0, 2],
        ];
        for _ in 0..1000 {
            let m = Media {
                eps: std::array::from_fn(|_| rng.random_range(0.1..10.0)),
                mu: std::array::from_fn(|_| rng.random_range(0.1..10.0)),
            };
            let p = derive_params(&m).unwrap();
            // α_i² − γ_i = β_i²/4
            for i in 0..3 {
                let lhs = p.alpha[i] * p.alpha[i] - p.gamma[i];
                let rhs = p.beta[i] * p.beta[i] / 4.0;
                let scale = p.alpha[i] * p.alpha[i];
                assert!((lhs - rhs).abs() <= 1e-12 * scale);
            }
            // α·g = β₁β₂β₃/2
            let dot: f64 = p.alpha.iter().zip(&p.g).map(|(a, g)| a * g).sum();
            let prod = p.beta[0] * p.beta[1] * p.beta[2] / 2.0;
            let scale = p.alpha.iter().zip(&p.g).map(|(a, g)| (a * g).abs()).sum::<f64>().max(1e-300);
            assert!((dot - prod).abs() <= 1e-12 * scale);
            // β ⊥ ε
            let be: f64 = p.beta.iter().zip(&m.eps).map(|(b, e)| b * e).sum();
            assert!(be.abs() <= 1e-12 * p.beta.iter().map(|b| b.abs()).sum::<f64>().max(1e-300) * 10.0);
            // class invariant under permutation and swap
            let perm = PERMS[rng.random_range(0..6)];
            let swapped = rng.random_bool(0.5);
            let q = derive_params(&m.transformed(perm, swapped)).unwrap();
            assert_eq!(p.class, q.class);
        }
    }

    #[test]
    fn media_json_roundtrip() {
        let m = Media::new([1.0, 2.0, 1.0], [1.0, 1.0, 1.0]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"epsilon\""));
        let back: Media = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);
    }
}
