//! Exact-rational mirror of the media/dispersion formulas.
//!
//! Degree certificates and the worked-media anchor checks are exact
//! statements; this module re-derives the needed quantities over `Q` so that
//! no floating pruning can change a support or a sign.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::media::MediaClass;
use crate::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rational media pair.
#[derive(Clone, Debug, PartialEq)]
pub struct MediaQ {
    pub eps: [Q; 3],
    pub mu: [Q; 3],
}

/// Derived parameters over `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedQ {
    pub beta: [Q; 3],
    pub alpha: [Q; 3],
    pub gamma: [Q; 3],
    pub g: [Q; 3],
    pub class: MediaClass,
}

impl MediaQ {
    pub fn from_ints(eps: [i64; 3], mu: [i64; 3]) -> Result<Self> {
        let m = Self {
            eps: [qi(eps[0]), qi(eps[1]), qi(eps[2])],
            mu: [qi(mu[0]), qi(mu[1]), qi(mu[2])],
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for v in self.eps.iter().chain(self.mu.iter()) {
            if !v.is_positive() {
                return Err(Error::InvalidMedia(format!("components must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn to_f64(&self) -> crate::media::Media {
        use num_traits::ToPrimitive;
        crate::media::Media {
            eps: std::array::from_fn(|i| self.eps[i].to_f64().unwrap()),
            mu: std::array::from_fn(|i| self.mu[i].to_f64().unwrap()),
        }
    }
}

pub fn derive_q(m: &MediaQ) -> Result<DerivedQ> {
    m.validate()?;
    let e = &m.eps;
    let u = &m.mu;
    let beta = [
        &e[1] * &u[2] - &e[2] * &u[1],
        &e[2] * &u[0] - &e[0] * &u[2],
        &e[0] * &u[1] - &e[1] * &u[0],
    ];
    let alpha = [
        (&e[1] * &u[2] + &e[2] * &u[1]) / qi(2),
        (&e[2] * &u[0] + &e[0] * &u[2]) / qi(2),
        (&e[0] * &u[1] + &e[1] * &u[0]) / qi(2),
    ];
    let gamma = [
        &e[1] * &e[2] * &u[1] * &u[2],
        &e[2] * &e[0] * &u[2] * &u[0],
        &e[0] * &e[1] * &u[0] * &u[1],
    ];
    let g = [
        &e[0] * &u[0] * &beta[0],
        &e[1] * &u[1] * &beta[1],
        &e[2] * &u[2] * &beta[2],
    ];
    let class = if beta.iter().all(Zero::is_zero) {
        MediaClass::B0
    } else if beta.iter().all(|b| !b.is_zero()) {
        MediaClass::B3
    } else {
        MediaClass::B12
    };
    Ok(DerivedQ { beta, alpha, gamma, g, class })
}

/// The symmetric quadric matrix `A` over `Q` (rows/cols 0-indexed):
///
/// ```text
/// [ γ₁        ε₃μ₃α₃    ε₂μ₂α₂ ]
/// [ ε₃μ₃α₃    γ₂        ε₁μ₁α₁ ]
/// [ ε₂μ₂α₂    ε₁μ₁α₁    γ₃     ]
/// ```
pub fn a_matrix_q(m: &MediaQ) -> Result<[[Q; 3]; 3]> {
    let p = derive_q(m)?;
    let e = &m.eps;
    let u = &m.mu;
    let w = [
        &e[0] * &u[0] * &p.alpha[0],
        &e[1] * &u[1] * &p.alpha[1],
        &e[2] * &u[2] * &p.alpha[2],
    ];
    Ok([
        [p.gamma[0].clone(), w[2].clone(), w[1].clone()],
        [w[2].clone(), p.gamma[1].clone(), w[0].clone()],
        [w[1].clone(), w[0].clone(), p.gamma[2].clone()],
    ])
}

/// Exact anchors for an `(A0)`-oriented `B₁₂` pair (`β₁ > β₂ = 0 > β₃`),
/// where both dispersion branches are linear in `z`:
///
/// ```text
/// τ⁺ = ε₂μ₃ z₁ + ε₃μ₁ z₂ + ε₂μ₁ z₃,
/// τ⁻ = ε₃μ₂ z₁ + ε₃μ₁ z₂ + ε₁μ₂ z₃.
/// ```
#[derive(Clone, Debug)]
pub struct B12Anchors {
    pub tau_plus: [Q; 3],
    pub tau_minus: [Q; 3],
    pub lambda_plus_sq: Q,
    pub lambda_minus_sq: Q,
    pub z_star: [Q; 3],
    pub alpha_dot_z_star: Q,
}

pub fn b12_anchors(m: &MediaQ) -> Result<B12Anchors> {
    let p = derive_q(m)?;
    if p.class != MediaClass::B12 || !p.beta[1].is_zero() || !p.beta[0].is_positive() {
        return Err(Error::Precondition(
            "anchors require an (A0)-oriented B12 pair with β₂ = 0".into(),
        ));
    }
    let e = &m.eps;
    let u = &m.mu;
    let tau_plus = [&e[1] * &u[2], &e[2] * &u[0], &e[1] * &u[0]];
    let tau_minus = [&e[2] * &u[1], &e[2] * &u[0], &e[0] * &u[1]];
    let lambda_plus_sq: Q = tau_plus.iter().sum();
    let at_111: Q = tau_minus.iter().sum();
    let at_110: Q = &tau_minus[0] + &tau_minus[1];
    let lambda_minus_sq = if at_111 >= at_110 { at_111 } else { at_110 };
    // β₂ = 0 forces α₂² = γ₂, so z* = (0, 1/α₂, 0) is exact.
    let z_star = [Q::zero(), Q::one() / &p.alpha[1], Q::zero()];
    let alpha_dot_z_star = &p.alpha[1] * &z_star[1];
    Ok(B12Anchors {
        tau_plus,
        tau_minus,
        lambda_plus_sq,
        lambda_minus_sq,
        z_star,
        alpha_dot_z_star,
    })
}

/// Exact matrix-vector product `A v`.
pub fn a_apply(a: &[[Q; 3]; 3], v: &[Q; 3]) -> [Q; 3] {
    std::array::from_fn(|i| (0..3).map(|j| &a[i][j] * &v[j]).sum())
}
