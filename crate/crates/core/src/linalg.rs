//! Dense symmetric linear-algebra helpers used by the finite-box null test:
//! inertia counts via Bunch-Kaufman factorization and deflated inverse
//! iteration for the smallest singular pairs.

use faer::prelude::*;
use faer::{Mat, Side};

use crate::{Error, Result};

/// Number of negative eigenvalues of the symmetric matrix `A − shift·I`,
/// by Sylvester's law applied to the Bunch-Kaufman `L B Lᵀ` factorization.
pub fn eigencount_below(a: &Mat<f64>, shift: f64) -> usize {
    let n = a.nrows();
    let mut shifted = a.clone();
    for i in 0..n {
        shifted[(i, i)] -= shift;
    }
    let lblt = shifted.lblt(Side::Lower);
    let d = lblt.B_diag();
    let s = lblt.B_subdiag();
    let mut neg = 0usize;
    let mut i = 0usize;
    while i < n {
        let sub = if i + 1 < n { s[i] } else { 0.0 };
        if sub != 0.0 {
            // 2×2 block [[d_i, s_i], [s_i, d_{i+1}]]
            let det = d[i] * d[i + 1] - sub * sub;
            let tr = d[i] + d[i + 1];
            if det < 0.0 {
                neg += 1;
            } else if det > 0.0 && tr < 0.0 {
                neg += 2;
            } else if det == 0.0 && tr < 0.0 {
                neg += 1;
            }
            i += 2;
        } else {
            if d[i] < 0.0 {
                neg += 1;
            }
            i += 1;
        }
    }
    neg
}

/// A singular pair candidate of an (implicitly given) matrix `M`.
#[derive(Clone, Debug)]
pub struct SingularPair {
    /// Upper bound `‖M v‖` with `‖v‖ = 1`, evaluated in full precision.
    pub sigma: f64,
    pub vector: Vec<f64>,
}

/// Deflated inverse iteration on the normal matrix `N = MᵀM`.
///
/// Extracts up to `count` approximate smallest singular pairs. Solves use a
/// Cholesky factorization of `N + mu·I`; `sigma` is recomputed as `‖M v‖`
/// through `apply_m`, so it is a true upper bound on `σ_min` regardless of
/// the iteration's convergence.
pub fn smallest_singular_pairs(
    normal: &Mat<f64>,
    apply_m: &dyn Fn(&[f64]) -> Vec<f64>,
    count: usize,
    mu: f64,
    max_iters: usize,
    seed: u64,
) -> Result<Vec<SingularPair>> {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    let n = normal.nrows();
    let mut shifted = normal.clone();
    for i in 0..n {
        shifted[(i, i)] += mu;
    }
    let llt = shifted
        .llt(Side::Lower)
        .map_err(|_| Error::Eigensolver("Cholesky of N + muI failed (mu too small?)".into()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<SingularPair> = Vec::new();

    for _ in 0..count {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        orthonormalize(&mut v, &found)?;
        let mut sigma = f64::INFINITY;
        for it in 0..max_iters {
            let rhs = Mat::from_fn(n, 1, |i, _| v[i]);
            let sol = llt.solve(&rhs);
            for i in 0..n {
                v[i] = sol[(i, 0)];
            }
            orthonormalize(&mut v, &found)?;
            if it % 4 == 3 || it + 1 == max_iters {
                let mv = apply_m(&v);
                let new_sigma = mv.iter().map(|x| x * x).sum::<f64>().sqrt();
                let converged = (sigma - new_sigma).abs() <= 1e-6 * (new_sigma + 1e-300);
                sigma = new_sigma;
                if converged {
                    break;
                }
            }
        }
        let mv = apply_m(&v);
        let sigma = mv.iter().map(|x| x * x).sum::<f64>().sqrt();
        found.push(SingularPair { sigma, vector: v });
    }
    found.sort_by(|a, b| a.sigma.partial_cmp(&b.sigma).unwrap());
    Ok(found)
}

/// Gram-Schmidt against found vectors, then normalize.
fn orthonormalize(v: &mut [f64], found: &[SingularPair]) -> Result<()> {
    for _ in 0..2 {
        for f in found {
            let dot: f64 = v.iter().zip(&f.vector).map(|(a, b)| a * b).sum();
            for (vi, fi) in v.iter_mut().zip(&f.vector) {
                *vi -= dot * fi;
            }
        }
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-200 {
        return Err(Error::Eigensolver("inverse-iteration vector collapsed".into()));
    }
    for x in v.iter_mut() {
        *x /= norm;
    }
    Ok(())
}
