//! Pointwise symbol matrices and their numeric spectral decompositions.
//!
//! These are the brute-force oracles behind every closed form in the crate:
//! the `6×6` fiber matrix `H^D(x) = D H₀(x)`, the reduced `3×3` matrix
//! `B(x) = −μ M̃(y) ε M̃(y)`, and a small dense eigensolver that groups
//! nearly-degenerate eigenvalues and produces spectral projectors.

use nalgebra::{DMatrix, DVector, Matrix3, Matrix6, Vector3};

use crate::media::Media;
use crate::{Error, Result};

/// Default relative tolerance for grouping nearly-degenerate eigenvalues.
pub const EIGEN_GROUP_REL: f64 = 1e-8;

/// The antisymmetric cross-product matrix: `M̃(y) v = y × v`.
pub fn mtilde(y: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(
        0.0, -y[2], y[1], //
        y[2], 0.0, -y[0], //
        -y[1], y[0], 0.0,
    )
}

/// Isotropic symbol `H₀` as a function of `y = sin x`.
pub fn h0_of_y(y: &Vector3<f64>) -> Matrix6<f64> {
    let m = mtilde(y);
    let mut h = Matrix6::zeros();
    h.fixed_view_mut::<3, 3>(0, 3).copy_from(&m);
    h.fixed_view_mut::<3, 3>(3, 0).copy_from(&(-m));
    h
}

/// `h^D(y) = D H₀(y)`: top-right block `ε M̃(y)`, bottom-left `−μ M̃(y)`.
pub fn hd_of_y(media: &Media, y: &Vector3<f64>) -> Matrix6<f64> {
    let m = mtilde(y);
    let mut h = Matrix6::zeros();
    for i in 0..3 {
        for j in 0..3 {
            h[(i, j + 3)] = media.eps[i] * m[(i, j)];
            h[(i + 3, j)] = -media.mu[i] * m[(i, j)];
        }
    }
    h
}

pub fn y_of_x(x: &[f64; 3]) -> Vector3<f64> {
    Vector3::new(x[0].sin(), x[1].sin(), x[2].sin())
}

pub fn z_of_x(x: &[f64; 3]) -> [f64; 3] {
    let y = y_of_x(x);
    [y[0] * y[0], y[1] * y[1], y[2] * y[2]]
}

/// Fiber symbol at a torus point.
pub fn hd_symbol(media: &Media, x: &[f64; 3]) -> Matrix6<f64> {
    hd_of_y(media, &y_of_x(x))
}

pub fn h0_symbol(x: &[f64; 3]) -> Matrix6<f64> {
    h0_of_y(&y_of_x(x))
}

/// `B(x) = −μ M̃(y) ε M̃(y)` as a function of `y`.
pub fn b_of_y(media: &Media, y: &Vector3<f64>) -> Matrix3<f64> {
    let m = mtilde(y);
    let eps = Matrix3::from_diagonal(&Vector3::from(media.eps));
    let mu = Matrix3::from_diagonal(&Vector3::from(media.mu));
    -(mu * m * eps * m)
}

pub fn b_matrix(media: &Media, x: &[f64; 3]) -> Matrix3<f64> {
    b_of_y(media, &y_of_x(x))
}

/// Eigenvalues of `h^D(y)`, sorted ascending, via the symmetrization
/// `D^{1/2} H₀ D^{1/2}` (similar to `h^D`, exactly symmetric).
pub fn hd_eigenvalues(media: &Media, y: &Vector3<f64>) -> [f64; 6] {
    let h0 = h0_of_y(y);
    let mut d_sqrt = [0.0f64; 6];
    for i in 0..3 {
        d_sqrt[i] = media.eps[i].sqrt();
        d_sqrt[i + 3] = media.mu[i].sqrt();
    }
    let s = Matrix6::from_fn(|i, j| d_sqrt[i] * h0[(i, j)] * d_sqrt[j]);
    let mut ev: Vec<f64> = s.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    std::array::from_fn(|i| ev[i])
}

/// A grouped spectral decomposition: one representative eigenvalue per
/// cluster together with its spectral projector.
#[derive(Clone, Debug)]
pub struct EigenDecomp {
    /// Sorted eigenvalues, one entry per eigenvalue (with multiplicity).
    pub eigenvalues: Vec<f64>,
    /// Cluster representatives (means), sorted ascending.
    pub grouped: Vec<f64>,
    /// Multiplicity of each cluster.
    pub multiplicity: Vec<usize>,
    /// Spectral projectors, one per cluster, summing to the identity.
    pub projectors: Vec<DMatrix<f64>>,
}

/// Group a sorted eigenvalue list with the given absolute gap.
fn group_sorted(ev: &[f64], gap: f64) -> (Vec<f64>, Vec<usize>) {
    let mut reps = Vec::new();
    let mut mult = Vec::new();
    let mut start = 0usize;
    for i in 1..=ev.len() {
        if i == ev.len() || ev[i] - ev[i - 1] > gap {
            let cluster = &ev[start..i];
            reps.push(cluster.iter().sum::<f64>() / cluster.len() as f64);
            mult.push(cluster.len());
            start = i;
        }
    }
    (reps, mult)
}

/// Spectral decomposition of a small diagonalizable matrix with real
/// spectrum. Eigenvalues come from the real Schur form; projectors are built
/// as polynomial interpolants over the eigenvalue clusters
/// (`Π_g = Π_{h≠g} (M − λ_h)/(λ_g − λ_h)`), which is exact for
/// diagonalizable matrices and rank-correct for clustered spectra.
pub fn eigen_decomp(m: &DMatrix<f64>, group_rel: f64) -> Result<EigenDecomp> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::ShapeMismatch(format!("eigen_decomp of {}x{}", n, m.ncols())));
    }
    let complex_ev = m.complex_eigenvalues();
    let radius = complex_ev.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let scale = radius.max(1e-300);
    let mut ev: Vec<f64> = Vec::with_capacity(n);
    for c in complex_ev.iter() {
        if c.im.abs() > 1e-7 * scale {
            return Err(Error::Eigensolver(format!(
                "expected real spectrum, found eigenvalue {c}"
            )));
        }
        ev.push(c.re);
    }
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let (grouped, multiplicity) = group_sorted(&ev, group_rel * scale);
    let id = DMatrix::<f64>::identity(n, n);
    let mut projectors = Vec::with_capacity(grouped.len());
    for (gi, &lg) in grouped.iter().enumerate() {
        let mut p = id.clone();
        for (hi, &lh) in grouped.iter().enumerate() {
            if hi == gi {
                continue;
            }
            p = (&p * (m - &id * lh)) / (lg - lh);
        }
        projectors.push(p);
    }

    let decomp = EigenDecomp { eigenvalues: ev, grouped, multiplicity, projectors };
    decomp.validate(m, scale)?;
    Ok(decomp)
}

impl EigenDecomp {
    /// Check idempotency, resolution of identity, commutation, and the
    /// eigen-residual `‖MΠ − λΠ‖`.
    fn validate(&self, m: &DMatrix<f64>, scale: f64) -> Result<()> {
        let n = m.nrows();
        let id = DMatrix::<f64>::identity(n, n);
        let mut sum = DMatrix::<f64>::zeros(n, n);
        for (k, p) in self.projectors.iter().enumerate() {
            let idem = (p * p - p).norm();
            if idem > 1e-8 * (1.0 + p.norm()) {
                return Err(Error::Eigensolver(format!("projector {k} not idempotent: {idem:.3e}")));
            }
            let comm = (m * p - p * m).norm();
            if comm > 1e-8 * scale.max(1.0) {
                return Err(Error::Eigensolver(format!("projector {k} does not commute: {comm:.3e}")));
            }
            let resid = (m * p - p * self.grouped[k]).norm();
            if resid > 1e-8 * scale.max(1.0) * (1.0 + p.norm()) {
                return Err(Error::Eigensolver(format!(
                    "eigen-residual too large for cluster {k}: {resid:.3e}"
                )));
            }
            sum += p;
        }
        let res = (&sum - &id).norm();
        if res > 1e-8 * (n as f64) {
            return Err(Error::Eigensolver(format!("projectors do not sum to identity: {res:.3e}")));
        }
        Ok(())
    }

    /// Apply the projector of cluster `k` to a vector.
    pub fn project(&self, k: usize, v: &DVector<f64>) -> DVector<f64> {
        &self.projectors[k] * v
    }
}
