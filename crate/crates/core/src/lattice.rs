//! Finitely supported fields on Z³ and the nearest-neighbor realization of
//! the Maxwell operator.
//!
//! Multiplication by `sin x_j` on the torus corresponds to the stencil
//! `(û(n+e_j) − û(n−e_j))/(2i)` on coefficients, so `Ĥ₀` couples nearest
//! neighbors only and `Ĥ^{D_p}` applies the (possibly site-dependent)
//! diagonal `D̂_p(n)` afterwards.
//!
//! Two lattice norms are in play and named explicitly to avoid mixups: the
//! Besov sums use `|n| = Σ|n_j|` (ℓ¹), the shell diagnostics elsewhere use
//! `|n|_∞`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::media::Media;
use crate::{Error, Result};

/// Value of a field at one site.
pub type CVec6 = [Complex64; 6];

/// Lattice site.
pub type Site = [i32; 3];

pub fn l1_norm(n: &Site) -> i64 {
    n.iter().map(|v| v.unsigned_abs() as i64).sum()
}

pub fn linf_norm(n: &Site) -> i32 {
    n.iter().map(|v| v.abs()).max().unwrap()
}

/// Finitely supported map `Z³ → C⁶`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LatticeField {
    values: BTreeMap<Site, CVec6>,
}

impl LatticeField {
    pub fn new() -> Self {
        Self::default()
    }

    /// Unit field `δ_site ⊗ e_component`.
    pub fn delta(site: Site, component: usize) -> Self {
        let mut v = [Complex64::ZERO; 6];
        v[component] = Complex64::ONE;
        let mut f = Self::new();
        f.set(site, v);
        f
    }

    pub fn set(&mut self, site: Site, value: CVec6) {
        if value.iter().all(|c| c.norm_sqr() == 0.0) {
            self.values.remove(&site);
        } else {
            self.values.insert(site, value);
        }
    }

    pub fn add_to(&mut self, site: Site, value: CVec6) {
        let mut cur = self.get(&site);
        for i in 0..6 {
            cur[i] += value[i];
        }
        self.set(site, cur);
    }

    pub fn get(&self, site: &Site) -> CVec6 {
        self.values.get(site).copied().unwrap_or([Complex64::ZERO; 6])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Site, &CVec6)> {
        self.values.iter()
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Componentwise bounding box of the support.
    pub fn support_box(&self) -> Option<(Site, Site)> {
        let mut it = self.values.keys();
        let first = *it.next()?;
        let mut lo = first;
        let mut hi = first;
        for s in it {
            for a in 0..3 {
                lo[a] = lo[a].min(s[a]);
                hi[a] = hi[a].max(s[a]);
            }
        }
        Some((lo, hi))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.values().flatten().map(|c| c.norm_sqr()).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::new();
        for (s, v) in &self.values {
            out.set(*s, std::array::from_fn(|i| v[i] * c));
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (s, v) in &rhs.values {
            out.add_to(*s, std::array::from_fn(|i| -v[i]));
        }
        out
    }

    /// ℓ² inner product `Σ_n <u(n), v(n)>` (conjugating `v`).
    pub fn dot(&self, rhs: &Self) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for (s, v) in &self.values {
            let w = rhs.get(s);
            for i in 0..6 {
                acc += v[i] * w[i].conj();
            }
        }
        acc
    }

    /// Keep only sites with `|n|_∞ <= radius`.
    pub fn truncated_linf(&self, radius: i32) -> Self {
        let mut out = Self::new();
        for (s, v) in &self.values {
            if linf_norm(s) <= radius {
                out.set(*s, *v);
            }
        }
        out
    }

    /// Besov partial sums `(R, (1/R) Σ_{|n|₁ < R} |û(n)|²)`.
    pub fn besov_profile(&self, rs: &[usize]) -> Vec<(usize, f64)> {
        rs.iter()
            .map(|&r| {
                let sum: f64 = self
                    .values
                    .iter()
                    .filter(|(s, _)| l1_norm(s) < r as i64)
                    .flat_map(|(_, v)| v.iter())
                    .map(|c| c.norm_sqr())
                    .sum();
                (r, sum / r as f64)
            })
            .collect()
    }

    /// Evaluate `u(x) = Σ_n û(n) e^{-i n·x}` on the uniform `N³` grid.
    /// Frequencies beyond `N/2` alias; callers pick `N` large enough.
    pub fn sample_on_grid(&self, n: usize) -> Vec<CVec6> {
        use crate::fourier::{bin_of_freq, fft3_forward, grid_index};
        let mut comps: Vec<Vec<Complex64>> = vec![vec![Complex64::ZERO; n * n * n]; 6];
        for (s, v) in &self.values {
            let bin = [
                bin_of_freq(s[0], n),
                bin_of_freq(s[1], n),
                bin_of_freq(s[2], n),
            ];
            let idx = grid_index(bin, n);
            for c in 0..6 {
                comps[c][idx] += v[c];
            }
        }
        for comp in comps.iter_mut() {
            fft3_forward(comp, n);
        }
        (0..n * n * n)
            .map(|i| std::array::from_fn(|c| comps[c][i]))
            .collect()
    }
}

/// Locally perturbed media: a constant background with positive diagonal
/// replacements on finitely many sites.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PerturbedMedia {
    pub background: Media,
    #[serde(default)]
    pub sites: BTreeMap<Site, SitePerturbation>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SitePerturbation {
    pub eps: [f64; 3],
    pub mu: [f64; 3],
}

impl PerturbedMedia {
    pub fn unperturbed(background: Media) -> Self {
        Self { background, sites: BTreeMap::new() }
    }

    pub fn with_site(mut self, site: Site, eps: [f64; 3], mu: [f64; 3]) -> Result<Self> {
        for v in eps.iter().chain(mu.iter()) {
            if !v.is_finite() || *v <= 0.0 {
                return Err(Error::InvalidMedia(format!(
                    "perturbed components must be positive, got {v}"
                )));
            }
        }
        self.sites.insert(site, SitePerturbation { eps, mu });
        Ok(self)
    }

    /// Diagonal of `D̂_p` at a site.
    pub fn d_at(&self, site: &Site) -> [f64; 6] {
        match self.sites.get(site) {
            Some(p) => [p.eps[0], p.eps[1], p.eps[2], p.mu[0], p.mu[1], p.mu[2]],
            None => {
                let m = &self.background;
                [m.eps[0], m.eps[1], m.eps[2], m.mu[0], m.mu[1], m.mu[2]]
            }
        }
    }

    /// `K̂ = D̂ (D̂_p)⁻¹ − I`: diagonal, supported exactly on the perturbed sites.
    pub fn kernel_multiplier(&self) -> BTreeMap<Site, [f64; 6]> {
        let m = &self.background;
        let bg = [m.eps[0], m.eps[1], m.eps[2], m.mu[0], m.mu[1], m.mu[2]];
        self.sites
            .keys()
            .map(|s| {
                let d = self.d_at(s);
                (*s, std::array::from_fn(|i| bg[i] / d[i] - 1.0))
            })
            .collect()
    }
}

const CROSS: [[(usize, f64); 2]; 3] = [
    // e₁ × w = (0, −w₃, w₂): (target component, sign) pairs per source component handled below
    [(1, -1.0), (2, 1.0)],
    [(2, -1.0), (0, 1.0)],
    [(0, -1.0), (1, 1.0)],
];

/// `e_k × w` for a complex 3-vector.
fn cross_ek(k: usize, w: &[Complex64; 3]) -> [Complex64; 3] {
    let mut out = [Complex64::ZERO; 3];
    // e_k × w moves w_{k+2} to slot k+1 (negated) and w_{k+1} to slot k+2
    let (a, b) = (CROSS[k][0], CROSS[k][1]);
    out[a.0] = w[(k + 2) % 3] * a.1;
    out[b.0] = w[(k + 1) % 3] * b.1;
    out
}

/// Apply `Ĥ₀` by the nearest-neighbor stencil.
pub fn apply_h0(field: &LatticeField) -> LatticeField {
    // S_k u(n) = (u(n+e_k) − u(n−e_k))/(2i); scatter each input site to its
    // two neighbors. Then out_E = Σ_k e_k × (S_k u)_H, out_H = −Σ_k e_k × (S_k u)_E.
    let half_over_i = Complex64::new(0.0, -0.5); // 1/(2i)
    let mut out = LatticeField::new();
    for (site, v) in field.iter() {
        let v_e: [Complex64; 3] = [v[0], v[1], v[2]];
        let v_h: [Complex64; 3] = [v[3], v[4], v[5]];
        for k in 0..3 {
            for (target_shift, sign) in [(-1i32, 1.0), (1, -1.0)] {
                let mut n = *site;
                n[k] += target_shift;
                let w = half_over_i * sign;
                let ce = cross_ek(k, &v_h);
                let ch = cross_ek(k, &v_e);
                let mut val = [Complex64::ZERO; 6];
                for i in 0..3 {
                    val[i] = w * ce[i];
                    val[i + 3] = -w * ch[i];
                }
                out.add_to(n, val);
            }
        }
    }
    out
}

/// Apply `Ĥ^{D_p} = D̂_p Ĥ₀`.
pub fn apply_hd(field: &LatticeField, media: &PerturbedMedia) -> LatticeField {
    let h0 = apply_h0(field);
    let mut out = LatticeField::new();
    for (site, v) in h0.iter() {
        let d = media.d_at(site);
        out.set(*site, std::array::from_fn(|i| v[i] * d[i]));
    }
    out
}

/// `(Ĥ^{D_p} − λ) field`.
pub fn residual(field: &LatticeField, media: &PerturbedMedia, lambda: f64) -> LatticeField {
    let mut out = apply_hd(field, media);
    for (site, v) in field.iter() {
        out.add_to(*site, std::array::from_fn(|i| -lambda * v[i]));
    }
    out
}

/// The trigonometric-polynomial eigenmode `φ⁺(x) = (y, 0)` of `Ĥ₀` at
/// eigenvalue 0, as a lattice field: coefficients `±1/(2i)` at `∓e_j` in
/// component `j`.
pub fn phi_plus_field() -> LatticeField {
    let mut f = LatticeField::new();
    let c = Complex64::new(0.0, -0.5); // 1/(2i)
    for j in 0..3 {
        let mut m = [0i32; 3];
        m[j] = -1;
        let mut v = [Complex64::ZERO; 6];
        v[j] = c;
        f.add_to(m, v);
        m[j] = 1;
        v[j] = -c;
        f.add_to(m, v);
    }
    f
}

/// One serialized site: 6 complex entries as 12 reals (re, im pairs).
#[derive(Serialize, Deserialize)]
struct SiteRepr {
    n: Site,
    v: Vec<f64>,
}

/// Serialize as JSON lines `{"n":[..],"v":[12 reals]}`.
pub fn write_field_jsonl<W: std::io::Write>(field: &LatticeField, mut w: W) -> Result<()> {
    for (s, v) in field.iter() {
        let mut flat = Vec::with_capacity(12);
        for c in v {
            flat.push(c.re);
            flat.push(c.im);
        }
        let line = serde_json::to_string(&SiteRepr { n: *s, v: flat })?;
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn read_field_jsonl<R: std::io::BufRead>(r: R) -> Result<LatticeField> {
    let mut f = LatticeField::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let repr: SiteRepr = serde_json::from_str(&line)?;
        if repr.v.len() != 12 {
            return Err(Error::ShapeMismatch(format!("expected 12 reals, got {}", repr.v.len())));
        }
        f.set(
            repr.n,
            std::array::from_fn(|i| Complex64::new(repr.v[2 * i], repr.v[2 * i + 1])),
        );
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{grid_iter, grid_point, grid_index};
    use crate::symbol;
    use rand::prelude::*;

    #[test]
    fn stencil_worked_example() {
        // unit H₃ at the origin, isotropic media: M̃(y)(0,0,1)ᵀ = (y₂, −y₁, 0)
        let f = LatticeField::delta([0, 0, 0], 5);
        let out = apply_h0(&f);
        let i_half = Complex64::new(0.0, 0.5);
        assert_eq!(out.get(&[0, -1, 0])[0], -i_half);
        assert_eq!(out.get(&[0, 1, 0])[0], i_half);
        assert_eq!(out.get(&[-1, 0, 0])[1], i_half);
        assert_eq!(out.get(&[1, 0, 0])[1], -i_half);
        // H-block untouched, E₃ untouched
        for (s, v) in out.iter() {
            assert_eq!(v[2], Complex64::ZERO, "site {s:?}");
            for c in 3..6 {
                assert_eq!(v[c], Complex64::ZERO);
            }
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        assert!(apply_h0(&LatticeField::new()).is_zero());
    }

    #[test]
    fn support_grows_by_at_most_one() {
        let mut rng = StdRng::seed_from_u64(31);
        let pm = PerturbedMedia::unperturbed(Media::new([1.0, 2.0, 1.0], [1.0; 3]).unwrap());
        for _ in 0..20 {
            let mut f = LatticeField::new();
            for _ in 0..5 {
                let s = [
                    rng.random_range(-3..=3),
                    rng.random_range(-3..=3),
                    rng.random_range(-3..=3),
                ];
                f.set(s, std::array::from_fn(|_| Complex64::new(rng.random(), rng.random())));
            }
            let (lo, hi) = f.support_box().unwrap();
            let out = apply_hd(&f, &pm);
            if let Some((olo, ohi)) = out.support_box() {
                for a in 0..3 {
                    assert!(olo[a] >= lo[a] - 1 && ohi[a] <= hi[a] + 1);
                }
            }
        }
    }

    #[test]
    fn phi_plus_is_in_kernel() {
        let f = phi_plus_field();
        assert!(apply_h0(&f).is_zero());
        let pm = PerturbedMedia::unperturbed(Media::new([2.0, 1.0, 3.0], [1.0, 2.0, 1.0]).unwrap());
        assert!(apply_hd(&f, &pm).is_zero());
    }

    #[test]
    fn residual_of_delta_contains_lambda_term() {
        let pm = PerturbedMedia::unperturbed(Media::isotropic());
        let f = LatticeField::delta([0, 0, 0], 0);
        let r = residual(&f, &pm, 1.0);
        assert_eq!(r.get(&[0, 0, 0])[0], Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn zero_perturbation_residual_is_bitwise_identical() {
        let media = Media::new([1.0, 2.0, 1.0], [1.0; 3]).unwrap();
        let pm0 = PerturbedMedia::unperturbed(media);
        let pm1 = PerturbedMedia { background: media, sites: BTreeMap::new() };
        let mut rng = StdRng::seed_from_u64(9);
        let mut f = LatticeField::new();
        for _ in 0..8 {
            f.set(
                [rng.random_range(-2..=2), rng.random_range(-2..=2), rng.random_range(-2..=2)],
                std::array::from_fn(|_| Complex64::new(rng.random(), rng.random())),
            );
        }
        assert_eq!(residual(&f, &pm0, 1.3), residual(&f, &pm1, 1.3));
    }

    #[test]
    fn kernel_multiplier_identities() {
        let media = Media::isotropic();
        let pm = PerturbedMedia::unperturbed(media)
            .with_site([0, 0, 0], [2.0, 2.0, 2.0], [1.0, 1.0, 1.0])
            .unwrap();
        let k = pm.kernel_multiplier();
        assert_eq!(k.len(), 1);
        let k0 = k[&[0, 0, 0]];
        for i in 0..3 {
            assert_eq!(k0[i], -0.5); // ε/ε̃ − 1 = 1/2 − 1
            assert_eq!(k0[i + 3], 0.0);
        }
        // (I + K̂(n)) D̂_p(n) = D̂ exactly
        let d_p = pm.d_at(&[0, 0, 0]);
        let d_bg = PerturbedMedia::unperturbed(media).d_at(&[0, 0, 0]);
        for i in 0..6 {
            assert_eq!((1.0 + k0[i]) * d_p[i], d_bg[i]);
        }
        assert!(PerturbedMedia::unperturbed(media).kernel_multiplier().is_empty());
    }

    #[test]
    fn besov_profile_of_delta_is_one_over_r() {
        let f = LatticeField::delta([0, 0, 0], 0);
        let prof = f.besov_profile(&[1, 2, 5, 10]);
        for (r, v) in prof {
            assert!((v - 1.0 / r as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn stencil_matches_symbol_multiplication() {
        // Fourier-side application of H^D(x) equals the lattice stencil
        let mut rng = StdRng::seed_from_u64(77);
        let n = 16usize;
        for _ in 0..20 {
            let media = Media {
                eps: std::array::from_fn(|_| rng.random_range(0.1..10.0)),
                mu: std::array::from_fn(|_| rng.random_range(0.1..10.0)),
            };
            let pm = PerturbedMedia::unperturbed(media);
            let mut f = LatticeField::new();
            for _ in 0..6 {
                f.set(
                    [rng.random_range(-5..=5), rng.random_range(-5..=5), rng.random_range(-5..=5)],
                    std::array::from_fn(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))),
                );
            }
            let lattice_side = apply_hd(&f, &pm).sample_on_grid(n);
            let field_grid = f.sample_on_grid(n);
            let mut max_err = 0.0f64;
            let mut scale = 0.0f64;
            for idx in grid_iter(n) {
                let x = grid_point(idx, n);
                let h = symbol::hd_symbol(&media, &x);
                let u = field_grid[grid_index(idx, n)];
                let mut symbol_side = [Complex64::ZERO; 6];
                for i in 0..6 {
                    for j in 0..6 {
                        symbol_side[i] += h[(i, j)] * u[j];
                    }
                    scale = scale.max(symbol_side[i].norm());
                }
                let l = lattice_side[grid_index(idx, n)];
                for i in 0..6 {
                    max_err = max_err.max((l[i] - symbol_side[i]).norm());
                }
            }
            assert!(max_err <= 1e-9 * scale.max(1.0), "err {max_err:e} scale {scale:e}");
        }
    }

    #[test]
    fn d_inverse_symmetry() {
        // <D̂⁻¹ Ĥ^D u, v> = <D̂⁻¹ u, Ĥ^D v>
        let mut rng = StdRng::seed_from_u64(123);
        for _ in 0..50 {
            let media = Media {
                eps: std::array::from_fn(|_| rng.random_range(0.1..10.0)),
                mu: std::array::from_fn(|_| rng.random_range(0.1..10.0)),
            };
            let pm = PerturbedMedia::unperturbed(media);
            let dinv = |f: &LatticeField| {
                let d = pm.d_at(&[0, 0, 0]);
                let mut out = LatticeField::new();
                for (s, v) in f.iter() {
                    out.set(*s, std::array::from_fn(|i| v[i] / d[i]));
                }
                out
            };
            let mut u = LatticeField::new();
            let mut v = LatticeField::new();
            for _ in 0..5 {
                u.set(
                    [rng.random_range(-3..=3), rng.random_range(-3..=3), rng.random_range(-3..=3)],
                    std::array::from_fn(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))),
                );
                v.set(
                    [rng.random_range(-3..=3), rng.random_range(-3..=3), rng.random_range(-3..=3)],
                    std::array::from_fn(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))),
                );
            }
            let lhs = dinv(&apply_hd(&u, &pm)).dot(&v);
            let rhs = dinv(&u).dot(&apply_hd(&v, &pm));
            let scale = lhs.norm().max(rhs.norm()).max(1.0);
            assert!((lhs - rhs).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn jsonl_roundtrip() {
        let mut f = LatticeField::new();
        f.set([1, -2, 3], std::array::from_fn(|i| Complex64::new(i as f64, -(i as f64))));
        f.set([0, 0, 0], std::array::from_fn(|i| Complex64::new(0.5 * i as f64, 1.0)));
        let mut buf = Vec::new();
        write_field_jsonl(&f, &mut buf).unwrap();
        let back = read_field_jsonl(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(f, back);
    }
}
