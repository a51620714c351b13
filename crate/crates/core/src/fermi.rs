//! Real Fermi-surface extraction on the torus: sampling
//! `{x ∈ T³ : q(x;λ) = 0}`, separating the `τ⁺`/`τ⁻` sheets, and locating
//! singular points.
//!
//! Sampling works in `x`-space fibers rather than `z`-space so that the
//! torus multiplicity of the pullback `z = sin² x` comes for free: for each
//! `(x₁, x₂)` fiber the sign changes of `τ^±(z(x)) − λ²` along `x₃` are
//! bracketed and refined by bisection.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::{self, k0, p_eval, tau_pm, QuadricCase};
use crate::media::{derive_params, normalize_a0, DerivedParams, Media, MediaClass};
use crate::{Error, Result};

/// Default residual tolerance for emitted points.
pub const DEFAULT_POINT_TOL: f64 = 1e-8;

/// Sheet tag of a Fermi-surface point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sheet {
    Plus,
    Minus,
    Degenerate,
}

impl std::fmt::Display for Sheet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sheet::Plus => write!(f, "plus"),
            Sheet::Minus => write!(f, "minus"),
            Sheet::Degenerate => write!(f, "degenerate"),
        }
    }
}

/// One sampled surface point.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FermiPoint {
    pub x: [f64; 3],
    pub sheet: Sheet,
    /// `|q(x;λ)|` at the point.
    pub residual: f64,
}

/// Result of a surface scan.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FermiSample {
    pub lambda: f64,
    pub case: QuadricCase,
    pub grid: usize,
    pub points: Vec<FermiPoint>,
    pub count_plus: usize,
    pub count_minus: usize,
    pub count_degenerate: usize,
    /// Minimum of `|τ⁺(z) − λ²|` over all scanned samples.
    pub min_abs_plus: f64,
    /// Minimum of `|τ⁻(z) − λ²|` over all scanned samples.
    pub min_abs_minus: f64,
    /// Points discarded because the residual tolerance was not met.
    pub dropped: usize,
}

impl FermiSample {
    pub fn plus_empty(&self) -> bool {
        self.count_plus == 0
    }
    pub fn minus_empty(&self) -> bool {
        self.count_minus == 0
    }
}

fn z_at(x: &[f64; 3]) -> [f64; 3] {
    [
        x[0].sin().powi(2),
        x[1].sin().powi(2),
        x[2].sin().powi(2),
    ]
}

/// Degeneracy threshold for the sheet tag.
fn degenerate_at(p: &DerivedParams, z: &[f64; 3]) -> bool {
    let beta_max_sq = p.beta.iter().fold(0.0f64, |m, b| m.max(b * b));
    let znorm2: f64 = z.iter().map(|v| v * v).sum();
    k0(p, z) <= 1e-10 * (1.0 + znorm2) * beta_max_sq
}

fn tau_sheet(p: &DerivedParams, z: &[f64; 3], plus: bool) -> f64 {
    let (tp, tm) = tau_pm(p, z).expect("z from sin² is nonnegative");
    if plus {
        tp
    } else {
        tm
    }
}

/// Bisect `τ_sheet(z(x(t))) − λ²` on a parametrized segment with a sign
/// change between the endpoints; returns the located `x`.
pub fn refine_on_segment(
    p: &DerivedParams,
    lambda: f64,
    plus_sheet: bool,
    x_of_t: impl Fn(f64) -> [f64; 3],
    mut lo: f64,
    mut hi: f64,
) -> Result<[f64; 3]> {
    let l2 = lambda * lambda;
    let f = |t: f64| tau_sheet(p, &z_at(&x_of_t(t)), plus_sheet) - l2;
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(x_of_t(lo));
    }
    if fhi == 0.0 {
        return Ok(x_of_t(hi));
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Precondition("no sign change on segment".into()));
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || (hi - lo) < 1e-14 {
            return Ok(x_of_t(mid));
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(x_of_t(0.5 * (lo + hi)))
}

/// Scan the `N²` fibers in `(x₁, x₂)`, bracketing the roots of
/// `τ^±(z(x)) − λ²` along `x₃` and refining them by bisection.
///
/// For class `B₀` only one scan is performed (the sheets coincide) and every
/// point is tagged [`Sheet::Degenerate`]. An empty sample is a valid result.
pub fn sample_surface(media: &Media, lambda: f64, n: usize, tol: f64) -> Result<FermiSample> {
    if lambda == 0.0 {
        return Err(Error::Domain("sampling requires λ ≠ 0".into()));
    }
    let p = derive_params(media)?;
    let case = dispersion::quadric_model(media, lambda)?.case;
    let l2 = lambda * lambda;
    let h = std::f64::consts::TAU / n as f64;

    let sheets: &[bool] = match p.class {
        MediaClass::B0 => &[true],
        _ => &[true, false],
    };

    struct FiberOut {
        points: Vec<FermiPoint>,
        min_abs: [f64; 2],
        dropped: usize,
    }

    let fibers: Vec<FiberOut> = (0..n * n)
        .into_par_iter()
        .map(|fiber| {
            let i1 = fiber / n;
            let i2 = fiber % n;
            let x1 = i1 as f64 * h;
            let x2 = i2 as f64 * h;
            let mut out = FiberOut { points: Vec::new(), min_abs: [f64::INFINITY; 2], dropped: 0 };
            for &plus in sheets {
                let f = |x3: f64| tau_sheet(&p, &z_at(&[x1, x2, x3]), plus) - l2;
                let vals: Vec<f64> = (0..n).map(|k| f(k as f64 * h)).collect();
                let midx = if plus { 0 } else { 1 };
                for v in &vals {
                    out.min_abs[midx] = out.min_abs[midx].min(v.abs());
                }
                for k in 0..n {
                    let a = k as f64 * h;
                    let b = (k + 1) as f64 * h;
                    let fa = vals[k];
                    let fb = if k + 1 < n { vals[k + 1] } else { f(b) };
                    let x = if fa == 0.0 {
                        Some([x1, x2, a])
                    } else if fa.signum() != fb.signum() && fb != 0.0 {
                        refine_on_segment(&p, lambda, plus, |t| [x1, x2, t], a, b).ok()
                    } else {
                        None
                    };
                    if let Some(x) = x {
                        let z = z_at(&x);
                        let residual = p_eval(&p, &z, lambda).abs();
                        if residual >= tol {
                            out.dropped += 1;
                            continue;
                        }
                        let sheet = if degenerate_at(&p, &z) {
                            Sheet::Degenerate
                        } else if plus {
                            Sheet::Plus
                        } else {
                            Sheet::Minus
                        };
                        out.points.push(FermiPoint { x, sheet, residual });
                    }
                }
            }
            out
        })
        .collect();

    let mut points = Vec::new();
    let mut min_abs_plus = f64::INFINITY;
    let mut min_abs_minus = f64::INFINITY;
    let mut dropped = 0usize;
    for f in fibers {
        points.extend(f.points);
        min_abs_plus = min_abs_plus.min(f.min_abs[0]);
        min_abs_minus = min_abs_minus.min(f.min_abs[1]);
        dropped += f.dropped;
    }
    if p.class == MediaClass::B0 {
        min_abs_minus = min_abs_plus;
    }

    let count_plus = points.iter().filter(|q| q.sheet == Sheet::Plus).count();
    let count_minus = points.iter().filter(|q| q.sheet == Sheet::Minus).count();
    let count_degenerate = points.iter().filter(|q| q.sheet == Sheet::Degenerate).count();

    Ok(FermiSample {
        lambda,
        case,
        grid: n,
        points,
        count_plus,
        count_minus,
        count_degenerate,
        min_abs_plus,
        min_abs_minus,
        dropped,
    })
}

/// Report of the singular-point search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SingularReport {
    pub case: QuadricCase,
    pub points: Vec<[f64; 3]>,
    pub note: String,
}

/// Locate the real singular points of the Fermi variety.
///
/// * `B₃`: empty by structure (`b ∉ Im A`).
/// * `B₁₂`: the pullbacks of `z⁰ = (0, λ²/α₂, 0)` (in the `(A0)` frame),
///   mapped back through the normalizing permutation; empty when
///   `λ²/α₂ > 1`.
/// * `B₀`: a sampled point cloud of the plane `α·z = λ²` (principal
///   pullback branch).
pub fn singular_points(media: &Media, lambda: f64, n: usize) -> Result<SingularReport> {
    if lambda == 0.0 {
        return Err(Error::Domain("singular points require λ ≠ 0".into()));
    }
    let p = derive_params(media)?;
    let case = dispersion::quadric_model(media, lambda)?.case;
    let l2 = lambda * lambda;
    match p.class {
        MediaClass::B3 => Ok(SingularReport {
            case,
            points: Vec::new(),
            note: "class B3: the singular set is empty (b ∉ Im A)".into(),
        }),
        MediaClass::B12 => {
            let norm = normalize_a0(media)?;
            let pn = derive_params(&norm.media)?;
            let z2 = l2 / pn.alpha[1];
            if z2 > 1.0 {
                return Ok(SingularReport {
                    case,
                    points: Vec::new(),
                    note: format!("λ²/α₂ = {z2:.6} > 1: singular line misses the real torus"),
                });
            }
            let s = z2.sqrt().asin();
            let pi = std::f64::consts::PI;
            let tau = std::f64::consts::TAU;
            let mut x2s = vec![s, pi - s, pi + s, tau - s];
            x2s.sort_by(|a, b| a.partial_cmp(b).unwrap());
            x2s.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
            let mut points = Vec::new();
            for &x1 in &[0.0, pi] {
                for &x2 in &x2s {
                    for &x3 in &[0.0, pi] {
                        points.push(norm.x_to_original([x1, x2 % tau, x3]));
                    }
                }
            }
            Ok(SingularReport {
                case,
                points,
                note: "pullbacks of z⁰ = (0, λ²/α₂, 0) in the (A0) frame".into(),
            })
        }
        MediaClass::B0 => {
            let mut points = Vec::new();
            let h = 1.0 / (n.max(2) - 1) as f64;
            for i in 0..n {
                for j in 0..n {
                    let z1 = i as f64 * h;
                    let z2 = j as f64 * h;
                    let z3 = (l2 - p.alpha[0] * z1 - p.alpha[1] * z2) / p.alpha[2];
                    if (0.0..=1.0).contains(&z3) {
                        points.push([
                            z1.sqrt().asin(),
                            z2.sqrt().asin(),
                            z3.sqrt().asin(),
                        ]);
                    }
                }
            }
            Ok(SingularReport {
                case,
                points,
                note: "sampled plane α·z = λ² (β = 0: every surface point is degenerate); principal pullback branch".into(),
            })
        }
    }
}

/// Write a sample as CSV (`x1,x2,x3,sheet,residual`).
pub fn write_csv<W: std::io::Write>(sample: &FermiSample, mut w: W) -> Result<()> {
    writeln!(w, "x1,x2,x3,sheet,residual")?;
    for p in &sample.points {
        writeln!(w, "{:.17e},{:.17e},{:.17e},{},{:.3e}", p.x[0], p.x[1], p.x[2], p.sheet, p.residual)?;
    }
    Ok(())
}
