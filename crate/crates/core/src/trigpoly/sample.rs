//! Conversion between uniform torus-grid samples and sparse coefficients.

use num_complex::Complex64;

use super::TrigPoly;
use crate::fourier::{fft3_forward, grid_index, signed_freq};
use crate::{Error, Result};

impl TrigPoly<Complex64> {
    /// Recover a sparse polynomial from samples on the uniform `n³` grid
    /// (layout of [`crate::fourier`]). Exact for inputs band-limited below
    /// `n/2` per axis; otherwise higher frequencies alias into the result.
    ///
    /// When `bandwidth_hint` is given, grids with `n < 2·hint + 2` are
    /// rejected.
    pub fn from_samples(samples: &[Complex64], n: usize, bandwidth_hint: Option<usize>) -> Result<Self> {
        if samples.len() != n * n * n {
            return Err(Error::ShapeMismatch(format!(
                "expected {}³ = {} samples, got {}",
                n,
                n * n * n,
                samples.len()
            )));
        }
        if let Some(b) = bandwidth_hint {
            let needed = 2 * b + 2;
            if n < needed {
                return Err(Error::GridTooSmall { needed, got: n });
            }
        }
        let mut data = samples.to_vec();
        fft3_forward(&mut data, n);
        let scale = 1.0 / (n * n * n) as f64;
        let mut poly = TrigPoly::zero();
        for k1 in 0..n {
            for k2 in 0..n {
                for k3 in 0..n {
                    let c = data[grid_index([k1, k2, k3], n)] * scale;
                    if c.norm() > 0.0 {
                        poly.insert([signed_freq(k1, n), signed_freq(k2, n), signed_freq(k3, n)], c);
                    }
                }
            }
        }
        poly.prune(super::DEFAULT_PRUNE_REL);
        Ok(poly)
    }

    /// Evaluate on the whole uniform grid (the inverse of [`from_samples`]
    /// for band-limited polynomials).
    ///
    /// [`from_samples`]: TrigPoly::from_samples
    pub fn sample_grid(&self, n: usize) -> Vec<Complex64> {
        use crate::fourier::{bin_of_freq, fft3_inverse};
        // Place coefficients into bins, then a single inverse DFT evaluates
        // Σ c_m e^{i m·x} at every grid point at once.
        let mut data = vec![Complex64::ZERO; n * n * n];
        let scale = (n * n * n) as f64;
        for (m, c) in self.iter() {
            let bin = [
                bin_of_freq(m[0], n),
                bin_of_freq(m[1], n),
                bin_of_freq(m[2], n),
            ];
            data[grid_index(bin, n)] += c * scale;
        }
        fft3_inverse(&mut data, n);
        data
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{grid_iter, grid_point};

    #[test]
    fn sin_recovered_exactly() {
        let n = 8;
        let mut samples = vec![Complex64::ZERO; n * n * n];
        for i in grid_iter(n) {
            let x = grid_point(i, n);
            samples[grid_index(i, n)] = Complex64::new(x[0].sin(), 0.0);
        }
        let p = TrigPoly::from_samples(&samples, n, Some(1)).unwrap();
        let expect = TrigPoly::<Complex64>::sin(0);
        assert_eq!(p.num_terms(), 2);
        for (f, c) in expect.iter() {
            assert!((p.coeff(f) - c).norm() < 1e-14);
        }
    }

    #[test]
    fn z1_z2_product_matches_mul() {
        let n = 16;
        let mut samples = vec![Complex64::ZERO; n * n * n];
        for i in grid_iter(n) {
            let x = grid_point(i, n);
            let v = x[0].sin().powi(2) * x[1].sin().powi(2);
            samples[grid_index(i, n)] = Complex64::new(v, 0.0);
        }
        let p = TrigPoly::from_samples(&samples, n, Some(4)).unwrap();
        let expect = TrigPoly::<Complex64>::z(0).mul(&TrigPoly::z(1));
        assert_eq!(p.num_terms(), 9);
        for (f, c) in expect.iter() {
            assert!((p.coeff(f) - c).norm() < 1e-13, "mismatch at {f:?}");
        }
    }

    #[test]
    fn grid_too_small_flagged() {
        let n = 4;
        let samples = vec![Complex64::ZERO; n * n * n];
        let err = TrigPoly::from_samples(&samples, n, Some(2)).unwrap_err();
        assert!(matches!(err, Error::GridTooSmall { needed: 6, got: 4 }));
    }

    #[test]
    fn sample_grid_inverts_from_samples() {
        let p = TrigPoly::<Complex64>::z(0)
            .mul(&TrigPoly::z(2))
            .add(&TrigPoly::sin(1).scale(&Complex64::new(0.0, 2.0)));
        let n = 16;
        let grid = p.sample_grid(n);
        let q = TrigPoly::from_samples(&grid, n, None).unwrap();
        for (f, c) in p.iter() {
            assert!((q.coeff(f) - c).norm() < 1e-13);
        }
        assert_eq!(p.num_terms(), q.num_terms());
    }
}
