//! The explicit mode that defeats the Rellich property in the critical
//! regime `λ₋ < |λ| < λ₊` for class `B₁₂` media.
//!
//! With `B(x) = −μ M̃(y) ε M̃(y)` the mode is
//!
//! ```text
//! u_H(x) = (τ⁻(z) − λ²)⁻¹ adj(B(x) − λ²) v_H,
//! u_E(x) = λ⁻¹ ε M̃(y) u_H(x),
//! ```
//!
//! smooth because `|λ| > λ₋` keeps the denominator away from zero. Since
//! `det(B − λ²) = −λ²(τ⁺ − λ²)(τ⁻ − λ²)`, the residual is the trigonometric
//! polynomial `(H^D − λ)u = (0, −λ(τ⁺(z) − λ²) v_H)`, while `u` itself is
//! not a polynomial for a good choice of `v_H` (witnessed numerically by its
//! coefficient shells).
//!
//! Sign note: the adjugate identity `M·adj(M) = det(M)·I` fixes the residual
//! H-block to `−λ(τ⁺ − λ²)v_H`; the opposite sign sometimes quoted for this
//! construction is immaterial to any of its properties.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::{self, tau_pm};
use crate::fourier::{fft3_inverse, grid_index, grid_iter, grid_point, signed_freq};
use crate::lattice::{CVec6, LatticeField, Site};
use crate::media::{derive_params, normalize_a0, DerivedParams, Media, MediaClass, NormalizedMedia};
use crate::symbol::{b_of_y, mtilde, y_of_x};
use crate::trigpoly::TrigPoly;
use crate::{Error, Result};

/// Coefficients below this absolute size count as zero in support decisions.
pub const COEFF_ZERO_TOL: f64 = 1e-10;

/// Dense Fourier coefficients of a `C⁶` field on an `N³` grid, in the
/// lattice convention `u(x) = Σ_n û(n) e^{-i n·x}`.
#[derive(Clone, Debug)]
pub struct SpectralField {
    n: usize,
    comps: Vec<Vec<Complex64>>,
}

impl SpectralField {
    /// Transform grid samples (layout of [`crate::fourier`]) into
    /// coefficients.
    pub fn from_samples(samples: &[CVec6], n: usize) -> Self {
        assert_eq!(samples.len(), n * n * n);
        let mut comps: Vec<Vec<Complex64>> = (0..6)
            .map(|c| samples.iter().map(|v| v[c]).collect())
            .collect();
        for comp in comps.iter_mut() {
            fft3_inverse(comp, n);
        }
        Self { n, comps }
    }

    pub fn grid(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, site: &Site) -> CVec6 {
        let n = self.n;
        let bin = [
            crate::fourier::bin_of_freq(site[0], n),
            crate::fourier::bin_of_freq(site[1], n),
            crate::fourier::bin_of_freq(site[2], n),
        ];
        let idx = grid_index(bin, n);
        std::array::from_fn(|c| self.comps[c][idx])
    }

    fn coeff_norm_at(&self, idx: usize) -> f64 {
        (0..6).map(|c| self.comps[c][idx].norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |û(n)|` over each shell `|n|_∞ = R`, `R = 0..=r_max`.
    pub fn shell_profile(&self, r_max: usize) -> Vec<f64> {
        let n = self.n;
        let mut prof = vec![0.0f64; r_max + 1];
        for (idx, bins) in grid_iter(n).enumerate() {
            let f = [
                signed_freq(bins[0], n),
                signed_freq(bins[1], n),
                signed_freq(bins[2], n),
            ];
            let r = f.iter().map(|v| v.unsigned_abs() as usize).max().unwrap();
            if r <= r_max {
                let mag = self.coeff_norm_at(idx);
                if mag > prof[r] {
                    prof[r] = mag;
                }
            }
        }
        prof
    }

    /// Besov partial sums `(1/R) Σ_{|n|₁ < R} |û(n)|²` for each requested `R`.
    pub fn besov_profile(&self, rs: &[usize]) -> Vec<(usize, f64)> {
        let n = self.n;
        let max_l1 = 3 * (n / 2) + 1;
        let mut by_l1 = vec![0.0f64; max_l1 + 1];
        for (idx, bins) in grid_iter(n).enumerate() {
            let f = [
                signed_freq(bins[0], n),
                signed_freq(bins[1], n),
                signed_freq(bins[2], n),
            ];
            let l1: usize = f.iter().map(|v| v.unsigned_abs() as usize).sum();
            let mag2: f64 = (0..6).map(|c| self.comps[c][idx].norm_sqr()).sum();
            by_l1[l1.min(max_l1)] += mag2;
        }
        let mut prefix = vec![0.0f64; max_l1 + 2];
        for (i, v) in by_l1.iter().enumerate() {
            prefix[i + 1] = prefix[i] + v;
        }
        rs.iter()
            .map(|&r| {
                let s = prefix[r.min(max_l1 + 1)];
                (r, s / r as f64)
            })
            .collect()
    }

    pub fn total_norm_sqr(&self) -> f64 {
        self.comps.iter().flatten().map(|c| c.norm_sqr()).sum()
    }

    /// Truncate to a sparse lattice field with `|n|_∞ <= radius`.
    pub fn to_lattice_field(&self, radius: i32) -> LatticeField {
        let mut f = LatticeField::new();
        let r = radius;
        for n1 in -r..=r {
            for n2 in -r..=r {
                for n3 in -r..=r {
                    let site = [n1, n2, n3];
                    let v = self.coeff(&site);
                    if v.iter().any(|c| c.norm() > 0.0) {
                        f.set(site, v);
                    }
                }
            }
        }
        f
    }
}

/// Adjugate of a real 3×3 matrix by explicit cofactors.
pub fn adj3(m: &Matrix3<f64>) -> Matrix3<f64> {
    let c = |i1: usize, i2: usize, j1: usize, j2: usize| {
        m[(i1, j1)] * m[(i2, j2)] - m[(i1, j2)] * m[(i2, j1)]
    };
    // adj = transpose of cofactor matrix
    Matrix3::new(
        c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2), //
        -c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2), //
        c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1),
    )
}

/// The constructed counterexample mode and its diagnostics.
#[derive(Clone, Debug)]
pub struct Counterexample {
    /// `(A0)`-normalized `B₁₂` media the mode was built for.
    pub media: NormalizedMedia,
    pub lambda: f64,
    pub v_h: [f64; 3],
    pub grid: usize,
    /// Fourier coefficients of `u = (u_E, u_H)`.
    pub u_hat: SpectralField,
    /// Exact residual `(H^D − λ)u` as trigonometric polynomials (all six
    /// components; the E-block is identically zero).
    pub residual_exact: Vec<TrigPoly<Complex64>>,
    /// Max coefficient difference between the exact residual and the
    /// grid-sampled residual path.
    pub two_path_residual_error: f64,
    /// Largest `|n|_∞` carrying a residual coefficient above
    /// [`COEFF_ZERO_TOL`] (numeric path).
    pub residual_support_radius: i32,
    /// Range of the denominator `τ⁻(z) − λ²` over the grid.
    pub denominator_range: (f64, f64),
}

/// Grid samples of `u = (u_E, u_H)` for given media/λ/v_H.
fn sample_mode(
    params: &DerivedParams,
    media: &Media,
    lambda: f64,
    v_h: &Vector3<f64>,
    n: usize,
) -> (Vec<CVec6>, (f64, f64)) {
    let l2 = lambda * lambda;
    let mut samples = vec![[Complex64::ZERO; 6]; n * n * n];
    let mut den_min = f64::INFINITY;
    let mut den_max = f64::NEG_INFINITY;
    for idx3 in grid_iter(n) {
        let x = grid_point(idx3, n);
        let y = y_of_x(&x);
        let z = [y[0] * y[0], y[1] * y[1], y[2] * y[2]];
        let (_, tm) = tau_pm(params, &z).expect("z >= 0 on the grid");
        let den = tm - l2;
        den_min = den_min.min(den);
        den_max = den_max.max(den);
        let b = b_of_y(media, &y);
        let shifted = b - Matrix3::identity() * l2;
        let u_h = adj3(&shifted) * v_h / den;
        let eps = Matrix3::from_diagonal(&Vector3::from(media.eps));
        let u_e = eps * mtilde(&y) * u_h / lambda;
        let idx = grid_index(idx3, n);
        for i in 0..3 {
            samples[idx][i] = Complex64::new(u_e[i], 0.0);
            samples[idx][i + 3] = Complex64::new(u_h[i], 0.0);
        }
    }
    (samples, (den_min, den_max))
}

/// Exact residual `(H^D − λ)u = (0, −λ(τ⁺(z) − λ²)v_H)` as six polynomials.
/// Valid for `(A0)` media with `β₂ = 0`, where `τ⁺` is the linear form
/// `ε₂μ₃ z₁ + ε₃μ₁ z₂ + ε₂μ₁ z₃`.
fn exact_residual(media: &Media, lambda: f64, v_h: &Vector3<f64>) -> Vec<TrigPoly<Complex64>> {
    let e = media.eps;
    let u = media.mu;
    let coeffs = [e[1] * u[2], e[2] * u[0], e[1] * u[0]];
    let l2 = lambda * lambda;
    let mut tau_plus = TrigPoly::constant(Complex64::new(-l2, 0.0));
    for (j, c) in coeffs.iter().enumerate() {
        tau_plus = tau_plus.add(&TrigPoly::z(j).scale(&Complex64::new(*c, 0.0)));
    }
    let factor = tau_plus.scale(&Complex64::new(-lambda, 0.0));
    let mut out = vec![TrigPoly::zero(); 6];
    for i in 0..3 {
        out[i + 3] = factor.scale(&Complex64::new(v_h[i], 0.0));
    }
    out
}

/// Validate the window and class, then build the mode on an `N³` grid.
///
/// The returned [`Counterexample`] stores the `(A0)`-normalized media; the
/// construction happens in that frame.
pub fn build_counterexample(
    media: &Media,
    lambda: f64,
    v_h: [f64; 3],
    n: usize,
) -> Result<Counterexample> {
    if !n.is_power_of_two() || n < 64 {
        return Err(Error::GridTooSmall { needed: 64, got: n });
    }
    let v = Vector3::from(v_h);
    if v.norm() == 0.0 {
        return Err(Error::Precondition("v_H must be nonzero".into()));
    }
    let norm = normalize_a0(media)?;
    let params = derive_params(&norm.media)?;
    if params.class != MediaClass::B12 {
        return Err(Error::NotApplicable {
            class: match params.class {
                MediaClass::B0 => "B0",
                MediaClass::B3 => "B3",
                MediaClass::B12 => "B12",
            },
            reason: "the construction needs β ≠ 0 with β₁β₂β₃ = 0".into(),
        });
    }
    let ext = dispersion::lambda_extrema(&norm.media)?;
    if !(lambda.abs() > ext.lambda_minus && lambda.abs() < ext.lambda_plus) {
        return Err(Error::Domain(format!(
            "λ = {lambda} outside the critical window ({:.6}, {:.6})",
            ext.lambda_minus, ext.lambda_plus
        )));
    }

    let (samples, denominator_range) = sample_mode(&params, &norm.media, lambda, &v, n);
    let u_hat = SpectralField::from_samples(&samples, n);

    // numeric residual path: (H^D(x) − λ) u(x) pointwise on the grid
    let mut res_samples = vec![[Complex64::ZERO; 6]; n * n * n];
    for idx3 in grid_iter(n) {
        let idx = grid_index(idx3, n);
        let x = grid_point(idx3, n);
        let h = crate::symbol::hd_symbol(&norm.media, &x);
        let uv = samples[idx];
        for i in 0..6 {
            let mut acc = -lambda * uv[i];
            for j in 0..6 {
                acc += h[(i, j)] * uv[j];
            }
            res_samples[idx][i] = acc;
        }
    }

    let residual_exact = exact_residual(&norm.media, lambda, &v);
    let mut two_path_residual_error = 0.0f64;
    let mut residual_support_radius = 0i32;
    for c in 0..6 {
        let comp: Vec<Complex64> = res_samples.iter().map(|v| v[c]).collect();
        let numeric = TrigPoly::from_samples(&comp, n, None)?;
        // union support comparison
        for (f, coef) in numeric.iter() {
            let diff = (coef - residual_exact[c].coeff(f)).norm();
            two_path_residual_error = two_path_residual_error.max(diff);
            if coef.norm() > COEFF_ZERO_TOL {
                residual_support_radius =
                    residual_support_radius.max(f.iter().map(|v| v.abs()).max().unwrap());
            }
        }
        for (f, coef) in residual_exact[c].iter() {
            let diff = (coef - numeric.coeff(f)).norm();
            two_path_residual_error = two_path_residual_error.max(diff);
        }
    }

    Ok(Counterexample {
        media: norm,
        lambda,
        v_h,
        grid: n,
        u_hat,
        residual_exact,
        two_path_residual_error,
        residual_support_radius,
        denominator_range,
    })
}

/// Does the coefficient field witness non-polynomiality: every shell
/// `|n|_∞ = R`, `R <= r_check`, carries a coefficient above
/// `1e-12 · max`?
pub fn shells_nonzero(u_hat: &SpectralField, r_check: usize) -> bool {
    let prof = u_hat.shell_profile(r_check);
    let top = prof.iter().fold(0.0f64, |m, v| m.max(*v));
    prof.iter().all(|v| *v > 1e-12 * top)
}

/// Pick a `v_H` whose mode fails the polynomiality test: canonical basis
/// vectors first, then seeded random unit vectors. The adjugate
/// `adj(B − τ⁻)` has rank one wherever `K₀ ≠ 0`, so generic directions work.
pub fn choose_vh(media: &Media, lambda: f64, n: usize, seed: u64) -> Result<[f64; 3]> {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    let mut candidates: Vec<[f64; 3]> =
        vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let v = Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if v.norm() > 1e-3 {
            let u: Vector3<f64> = v / v.norm();
            candidates.push([u[0], u[1], u[2]]);
        }
    }
    for v_h in candidates {
        let ce = build_counterexample(media, lambda, v_h, n)?;
        if shells_nonzero(&ce.u_hat, 8) {
            return Ok(v_h);
        }
    }
    Err(Error::BuildFailure(
        "no candidate v_H produced a non-polynomial mode after 32 draws".into(),
    ))
}

/// Outcome of the `τ⁻`-reduction test.
#[derive(Clone, Debug)]
pub enum ReduceOutcome {
    /// `(τ⁻(z) − λ²) u` is band-limited; its six components.
    Poly(Vec<TrigPoly<Complex64>>),
    /// Mass fraction outside the `|n|_∞ <= 6` band.
    NotFinite { tail_fraction: f64 },
}

/// Multiply grid samples of a candidate field by `(τ⁻(z) − λ²)` and test
/// whether the product is a trigonometric polynomial: all coefficient mass
/// outside `|n|_∞ <= 6` must fall below `1e-9` of the total.
pub fn tau_minus_reduce(
    samples: &[CVec6],
    n: usize,
    media: &Media,
    lambda: f64,
) -> Result<ReduceOutcome> {
    let params = derive_params(media)?;
    let ext = dispersion::lambda_extrema(media)?;
    if lambda.abs() <= ext.lambda_minus {
        return Err(Error::Domain(format!(
            "reduction needs |λ| > λ₋ = {:.6}",
            ext.lambda_minus
        )));
    }
    if samples.len() != n * n * n {
        return Err(Error::ShapeMismatch("sample count".into()));
    }
    let l2 = lambda * lambda;
    let mut scaled = vec![[Complex64::ZERO; 6]; samples.len()];
    for idx3 in grid_iter(n) {
        let idx = grid_index(idx3, n);
        let x = grid_point(idx3, n);
        let z = crate::symbol::z_of_x(&x);
        let (_, tm) = tau_pm(&params, &z)?;
        let mult = tm - l2;
        for c in 0..6 {
            scaled[idx][c] = samples[idx][c] * mult;
        }
    }
    let field = SpectralField::from_samples(&scaled, n);
    let band: i32 = 6;
    let mut inside = 0.0f64;
    let mut total = 0.0f64;
    for (idx, bins) in grid_iter(n).enumerate() {
        let f = [
            signed_freq(bins[0], n),
            signed_freq(bins[1], n),
            signed_freq(bins[2], n),
        ];
        let mag2: f64 = (0..6).map(|c| field.comps[c][idx].norm_sqr()).sum();
        total += mag2;
        if f.iter().all(|v| v.abs() <= band) {
            inside += mag2;
        }
    }
    if !total.is_finite() {
        // non-finite samples (e.g. a pole on the grid) cannot be band-limited
        return Ok(ReduceOutcome::NotFinite { tail_fraction: 1.0 });
    }
    let tail_fraction = if total > 0.0 { (total - inside) / total } else { 0.0 };
    if tail_fraction < 1e-9 {
        let mut polys = Vec::with_capacity(6);
        for c in 0..6 {
            // rebuild each component as a sparse polynomial from its samples
            let comp: Vec<Complex64> = scaled.iter().map(|v| v[c]).collect();
            let mut p = TrigPoly::from_samples(&comp, n, None)?;
            p.prune(1e-12);
            polys.push(p);
        }
        Ok(ReduceOutcome::Poly(polys))
    } else {
        Ok(ReduceOutcome::NotFinite { tail_fraction })
    }
}

/// JSON report of a built counterexample.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenmodeReport {
    pub lambda: f64,
    pub v_h: [f64; 3],
    pub grid: usize,
    pub residual_support_radius: i32,
    pub two_path_residual_error: f64,
    pub denominator_range: (f64, f64),
    pub shell_profile: Vec<f64>,
    pub besov_profile: Vec<(usize, f64)>,
}

impl Counterexample {
    pub fn report(&self, shell_rmax: usize, besov_rs: &[usize]) -> EigenmodeReport {
        EigenmodeReport {
            lambda: self.lambda,
            v_h: self.v_h,
            grid: self.grid,
            residual_support_radius: self.residual_support_radius,
            two_path_residual_error: self.two_path_residual_error,
            denominator_range: self.denominator_range,
            shell_profile: self.u_hat.shell_profile(shell_rmax),
            besov_profile: self.u_hat.besov_profile(besov_rs),
        }
    }
}
