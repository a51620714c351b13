//! Matrices with trigonometric-polynomial entries and their determinants
//! and adjugates, computed by cofactor expansion over the polynomial ring.

use super::{Coeff, TrigPoly};
use crate::{Error, Result};

/// Row-major matrix of trigonometric polynomials.
#[derive(Clone, PartialEq, Debug)]
pub struct PolyMat<C: Coeff> {
    nrows: usize,
    ncols: usize,
    data: Vec<TrigPoly<C>>,
}

impl<C: Coeff> PolyMat<C> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, data: vec![TrigPoly::zero(); nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = TrigPoly::one();
        }
        m
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> TrigPoly<C>) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                data.push(f(i, j));
            }
        }
        Self { nrows, ncols, data }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(TrigPoly::is_zero)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.nrows != rhs.nrows || self.ncols != rhs.ncols {
            return Err(Error::ShapeMismatch(format!(
                "add: {}x{} vs {}x{}",
                self.nrows, self.ncols, rhs.nrows, rhs.ncols
            )));
        }
        Ok(Self {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Self { nrows: self.nrows, ncols: self.ncols, data: self.data.iter().map(TrigPoly::neg).collect() }
    }

    pub fn scale(&self, p: &TrigPoly<C>) -> Self {
        Self { nrows: self.nrows, ncols: self.ncols, data: self.data.iter().map(|e| e.mul(p)).collect() }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.ncols != rhs.nrows {
            return Err(Error::ShapeMismatch(format!(
                "matmul: {}x{} times {}x{}",
                self.nrows, self.ncols, rhs.nrows, rhs.ncols
            )));
        }
        let mut out = Self::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for j in 0..rhs.ncols {
                let mut acc = TrigPoly::zero();
                for k in 0..self.ncols {
                    acc = acc.add(&self[(i, k)].mul(&rhs[(k, j)]));
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)].clone())
    }

    /// Determinant of the submatrix given by `rows × cols` (index lists of
    /// equal length), by dynamic programming over column subsets.
    fn det_sub(&self, rows: &[usize], cols: &[usize]) -> TrigPoly<C> {
        let k = rows.len();
        debug_assert_eq!(k, cols.len());
        if k == 0 {
            return TrigPoly::one();
        }
        // dp over subsets of `cols`: after processing r rows, dp[mask] with
        // popcount(mask) == r is the determinant of rows[0..r] × cols[mask].
        let full = 1usize << k;
        let mut dp = vec![TrigPoly::<C>::zero(); full];
        dp[0] = TrigPoly::one();
        for (r, &row) in rows.iter().enumerate() {
            for mask in (0..full).rev() {
                if (mask as u32).count_ones() as usize != r {
                    continue;
                }
                if dp[mask].is_zero() {
                    continue;
                }
                let mut sign_flips = 0usize;
                for (c, &col) in cols.iter().enumerate() {
                    let bit = 1usize << c;
                    if mask & bit != 0 {
                        sign_flips += 1;
                        continue;
                    }
                    let entry = &self[(row, col)];
                    if entry.is_zero() {
                        continue;
                    }
                    let contrib = dp[mask].mul(entry);
                    let target = mask | bit;
                    // Laplace sign along row r: (−1)^{r + position of col in set}.
                    dp[target] = if (r + sign_flips) % 2 == 0 {
                        dp[target].add(&contrib)
                    } else {
                        dp[target].sub(&contrib)
                    };
                }
            }
        }
        dp[full - 1].clone()
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> Result<TrigPoly<C>> {
        if self.nrows != self.ncols {
            return Err(Error::ShapeMismatch(format!("det of {}x{}", self.nrows, self.ncols)));
        }
        let idx: Vec<usize> = (0..self.nrows).collect();
        Ok(self.det_sub(&idx, &idx))
    }

    /// Adjugate (transposed cofactor matrix): `M · adj(M) = det(M) · I`.
    pub fn adjugate(&self) -> Result<Self> {
        if self.nrows != self.ncols {
            return Err(Error::ShapeMismatch(format!("adjugate of {}x{}", self.nrows, self.ncols)));
        }
        let n = self.nrows;
        if n == 0 {
            return Ok(self.clone());
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
            for j in 0..n {
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let minor = self.det_sub(&rows, &cols);
                out[(j, i)] = if (i + j) % 2 == 0 { minor } else { minor.neg() };
            }
        }
        Ok(out)
    }
}

impl<C: Coeff> std::ops::Index<(usize, usize)> for PolyMat<C> {
    type Output = TrigPoly<C>;
    fn index(&self, (i, j): (usize, usize)) -> &TrigPoly<C> {
        &self.data[i * self.ncols + j]
    }
}

impl<C: Coeff> std::ops::IndexMut<(usize, usize)> for PolyMat<C> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut TrigPoly<C> {
        &mut self.data[i * self.ncols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trigpoly::GRat;
    use num_complex::Complex64;
    use rand::prelude::*;

    #[test]
    fn adjugate_of_identity() {
        let id = PolyMat::<Complex64>::identity(3);
        assert_eq!(id.adjugate().unwrap(), id);
        assert_eq!(id.det().unwrap(), TrigPoly::one());
    }

    #[test]
    fn det_2x2_exact() {
        // det [[sin x1, 1], [1, sin x1]] = z1 - 1
        let mut m = PolyMat::<GRat>::zeros(2, 2);
        m[(0, 0)] = TrigPoly::sin(0);
        m[(0, 1)] = TrigPoly::one();
        m[(1, 0)] = TrigPoly::one();
        m[(1, 1)] = TrigPoly::sin(0);
        let d = m.det().unwrap();
        let expect = TrigPoly::<GRat>::z(0).sub(&TrigPoly::one());
        assert_eq!(d, expect);
    }

    #[test]
    fn m_times_adjugate_is_det_times_identity() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in 2..=4usize {
            let m = PolyMat::<GRat>::from_fn(n, n, |_, _| {
                let mut p = TrigPoly::zero();
                for _ in 0..2 {
                    let f = [
                        rng.random_range(-1i32..=1),
                        rng.random_range(-1i32..=1),
                        rng.random_range(-1i32..=1),
                    ];
                    p = p.add(&TrigPoly::term(
                        f,
                        GRat::from_ratio(rng.random_range(-3i64..=3), 1, rng.random_range(-2i64..=2), 1),
                    ));
                }
                p
            });
            let adj = m.adjugate().unwrap();
            let det = m.det().unwrap();
            let prod = m.matmul(&adj).unwrap();
            let expect = PolyMat::identity(n).scale(&det);
            assert_eq!(prod, expect, "n = {n}");
            // and the other side
            let prod2 = adj.matmul(&m).unwrap();
            assert_eq!(prod2, expect, "n = {n} (left)");
        }
    }

    #[test]
    fn det_agrees_with_pointwise_lu() {
        use nalgebra::DMatrix;
        let mut rng = StdRng::seed_from_u64(13);
        let n = 4usize;
        let m = PolyMat::<Complex64>::from_fn(n, n, |_, _| {
            let f = [
                rng.random_range(-2i32..=2),
                rng.random_range(-2i32..=2),
                rng.random_range(-2i32..=2),
            ];
            TrigPoly::term(f, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        });
        let det = m.det().unwrap();
        for _ in 0..20 {
            let x = [
                rng.random_range(0.0..std::f64::consts::TAU),
                rng.random_range(0.0..std::f64::consts::TAU),
                rng.random_range(0.0..std::f64::consts::TAU),
            ];
            let pt = DMatrix::from_fn(n, n, |i, j| m[(i, j)].eval(&x));
            let lu_det = pt.lu().determinant();
            let poly_det = det.eval(&x);
            let scale = lu_det.norm().max(1.0);
            assert!((lu_det - poly_det).norm() / scale < 1e-9);
        }
    }
}
