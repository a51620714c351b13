//! Coefficient rings for sparse trigonometric polynomials.
//!
//! Three rings are used throughout the crate:
//!
//! * [`Complex64`] — the default floating mode,
//! * [`GRat`] — Gaussian rationals (exact mode, required by the degree
//!   certificates where support decisions must not depend on pruning),
//! * [`TPoly<C>`] — univariate polynomials in a formal real parameter `t`
//!   over either of the above, used for adjugates of `H^D(x) − t`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// A commutative coefficient ring with complex conjugation.
///
/// `EXACT` controls pruning: exact rings only drop coefficients that are
/// identically zero, while the float ring additionally drops coefficients
/// below a relative magnitude threshold.
pub trait Coeff: Clone + PartialEq + Send + Sync + std::fmt::Debug + 'static {
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Complex conjugate (the formal parameter of [`TPoly`] is treated as real).
    fn conj(&self) -> Self;
    /// Magnitude estimate; used for relative pruning and for reports.
    fn magnitude(&self) -> f64;
    /// Exact embedding of the complex rational `re_n/re_d + i·im_n/im_d`.
    fn from_ratio(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Self;
}

impl Coeff for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::ZERO
    }
    fn one() -> Self {
        Complex64::ONE
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn from_ratio(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Self {
        Complex64::new(re_n as f64 / re_d as f64, im_n as f64 / im_d as f64)
    }
}

/// Gaussian rational: `re + i·im` with arbitrary-precision rational parts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1, 0, 1)
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Coeff for GRat {
    const EXACT: bool = true;

    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn one() -> Self {
        Self::from_int(1)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        Self { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
    fn sub(&self, rhs: &Self) -> Self {
        Self { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
    fn mul(&self, rhs: &Self) -> Self {
        Self {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
    fn neg(&self) -> Self {
        Self { re: -self.re.clone(), im: -self.im.clone() }
    }
    fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }
    fn magnitude(&self) -> f64 {
        let re = self.re.abs().to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.abs().to_f64().unwrap_or(f64::INFINITY);
        re.hypot(im)
    }
    fn from_ratio(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Self {
        Self { re: Self::ratio(re_n, re_d), im: Self::ratio(im_n, im_d) }
    }
}

/// Dense univariate polynomial in a formal real parameter `t` with
/// coefficients in `C`; canonical form has a nonzero leading coefficient.
#[derive(Clone, PartialEq, Debug)]
pub struct TPoly<C: Coeff> {
    coeffs: Vec<C>,
}

impl<C: Coeff> TPoly<C> {
    pub fn from_coeffs(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().map_or(false, Coeff::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Self::from_coeffs(vec![C::zero(), C::one()])
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() { None } else { Some(self.coeffs.len() - 1) }
    }

    pub fn coeff_at(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Evaluation at `t = v` by Horner's rule.
    pub fn subst(&self, v: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(v).add(c);
        }
        acc
    }

    /// The part of degree `>= k`, divided by `t^k`.
    pub fn shift_down(&self, k: usize) -> Self {
        if self.coeffs.len() <= k {
            return Self { coeffs: Vec::new() };
        }
        Self::from_coeffs(self.coeffs[k..].to_vec())
    }
}

impl<C: Coeff> Coeff for TPoly<C> {
    const EXACT: bool = C::EXACT;

    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }
    fn one() -> Self {
        Self::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff_at(k).add(&rhs.coeff_at(k)));
        }
        Self::from_coeffs(out)
    }
    fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff_at(k).sub(&rhs.coeff_at(k)));
        }
        Self::from_coeffs(out)
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(out)
    }
    fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(Coeff::neg).collect() }
    }
    fn conj(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(Coeff::conj).collect() }
    }
    fn magnitude(&self) -> f64 {
        self.coeffs.iter().map(Coeff::magnitude).fold(0.0, f64::max)
    }
    fn from_ratio(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Self {
        Self::constant(C::from_ratio(re_n, re_d, im_n, im_d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grat_field_ops() {
        let a = GRat::from_ratio(1, 2, -1, 3);
        let b = GRat::from_ratio(2, 1, 1, 1);
        let prod = a.mul(&b);
        // (1/2 - i/3)(2 + i) = 1 + 1/3 + i(1/2 - 2/3)
        assert_eq!(prod.re, GRat::ratio(4, 3));
        assert_eq!(prod.im, GRat::ratio(-1, 6));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn tpoly_mul_and_subst() {
        // (1 + t)(1 - t) = 1 - t^2
        let one = TPoly::<Complex64>::one();
        let t = TPoly::<Complex64>::t();
        let p = one.add(&t).mul(&one.sub(&t));
        assert_eq!(p.degree(), Some(2));
        assert!(Coeff::is_zero(&p.coeff_at(1)));
        let v = p.subst(&Complex64::new(2.0, 0.0));
        assert_eq!(v.re, -3.0);
    }

    #[test]
    fn tpoly_shift_down() {
        // t + 2 t^2 + t^3 => shift_down(2) = 2 + t
        let t = TPoly::<Complex64>::t();
        let t2 = t.mul(&t);
        let t3 = t2.mul(&t);
        let p = t.add(&t2).add(&t2).add(&t3);
        let s = p.shift_down(2);
        assert_eq!(s.degree(), Some(1));
        assert_eq!(s.coeff_at(0).re, 2.0);
    }
}
