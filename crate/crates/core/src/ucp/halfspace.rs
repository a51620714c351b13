//! Half-space covers of convex lattice sets with normals in `G*`.
//!
//! A finite convex `K_int ⊂ Z³` is written as
//! `K_int = ∩_{(ξ,l)} {n : ξ·n ≤ l} ∩ box` with every `ξ` having a strictly
//! dominant coordinate. Integer candidate normals whose dominant coordinate
//! ties are pushed into `G*` by shrinking the tied entries by powers of two;
//! validity is decided by exhaustive enumeration over the bounding box.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::lattice::Site;
use crate::trigpoly::Direction;
use crate::{Error, Result};

/// Closed half-space `{n : ξ·n ≤ l}`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HalfSpace {
    pub xi: [f64; 3],
    pub level: f64,
}

impl HalfSpace {
    pub fn contains(&self, n: &Site) -> bool {
        self.xi[0] * n[0] as f64 + self.xi[1] * n[1] as f64 + self.xi[2] * n[2] as f64
            <= self.level + 1e-12
    }
}

/// Inclusive axis-aligned lattice box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBox {
    pub lo: Site,
    pub hi: Site,
}

impl LatticeBox {
    pub fn cube(radius: i32) -> Self {
        Self { lo: [-radius; 3], hi: [radius; 3] }
    }

    pub fn contains(&self, n: &Site) -> bool {
        (0..3).all(|a| self.lo[a] <= n[a] && n[a] <= self.hi[a])
    }

    pub fn len(&self) -> usize {
        (0..3)
            .map(|a| (self.hi[a] - self.lo[a] + 1).max(0) as usize)
            .product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Site> + '_ {
        let lo = self.lo;
        let hi = self.hi;
        (lo[0]..=hi[0]).flat_map(move |a| {
            (lo[1]..=hi[1]).flat_map(move |b| (lo[2]..=hi[2]).map(move |c| [a, b, c]))
        })
    }

    /// Shrink by `margin` on every face.
    pub fn shrunk(&self, margin: i32) -> LatticeBox {
        LatticeBox {
            lo: [self.lo[0] + margin, self.lo[1] + margin, self.lo[2] + margin],
            hi: [self.hi[0] - margin, self.hi[1] - margin, self.hi[2] - margin],
        }
    }
}

/// Is `p` in the convex hull of `points`? Phase-1 simplex on
/// `Σ λ_i k_i = p, Σ λ_i = 1, λ ≥ 0`.
fn in_convex_hull(p: &Site, points: &[Site]) -> bool {
    let m = 4usize;
    let n = points.len();
    if n == 0 {
        return false;
    }
    // rows: 3 coordinate equations + the affine constraint; make rhs ≥ 0
    let mut rhs = [p[0] as f64, p[1] as f64, p[2] as f64, 1.0];
    let mut cols: Vec<[f64; 4]> = points
        .iter()
        .map(|k| [k[0] as f64, k[1] as f64, k[2] as f64, 1.0])
        .collect();
    for r in 0..m {
        if rhs[r] < 0.0 {
            rhs[r] = -rhs[r];
            for col in cols.iter_mut() {
                col[r] = -col[r];
            }
        }
    }
    // tableau with artificial basis; minimize the sum of artificials
    let total = n + m;
    let mut t = vec![vec![0.0f64; total + 1]; m];
    for (r, row) in t.iter_mut().enumerate() {
        for (c, col) in cols.iter().enumerate() {
            row[c] = col[r];
        }
        row[n + r] = 1.0;
        row[total] = rhs[r];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // objective row for phase 1 (cost 1 on artificials)
    let mut obj = vec![0.0f64; total + 1];
    for r in 0..m {
        for c in 0..=total {
            obj[c] -= t[r][c];
        }
    }
    const TOL: f64 = 1e-9;
    for _ in 0..10_000 {
        // Bland's rule: first column with negative reduced cost
        let Some(pivot_col) = (0..n).find(|&c| obj[c] < -TOL) else { break };
        let mut pivot_row = None;
        let mut best = f64::INFINITY;
        for r in 0..m {
            if t[r][pivot_col] > TOL {
                let ratio = t[r][total] / t[r][pivot_col];
                if ratio < best - TOL || (pivot_row.is_none() && ratio < best + TOL) {
                    best = ratio;
                    pivot_row = Some(r);
                }
            }
        }
        let Some(pr) = pivot_row else { break };
        let piv = t[pr][pivot_col];
        for c in 0..=total {
            t[pr][c] /= piv;
        }
        for r in 0..m {
            if r != pr && t[r][pivot_col].abs() > 0.0 {
                let f = t[r][pivot_col];
                for c in 0..=total {
                    t[r][c] -= f * t[pr][c];
                }
            }
        }
        let f = obj[pivot_col];
        if f.abs() > 0.0 {
            for c in 0..=total {
                obj[c] -= f * t[pr][c];
            }
        }
        basis[pr] = pivot_col;
    }
    // feasible iff every artificial contributes zero
    let artificial_mass: f64 = basis
        .iter()
        .enumerate()
        .filter(|(_, b)| **b >= n)
        .map(|(r, _)| t[r][total])
        .sum();
    artificial_mass.abs() <= 1e-7
}

/// Candidate integer normals: primitive vectors with entries in `{-2..2}`.
fn candidate_normals() -> Vec<[i32; 3]> {
    fn gcd(a: i32, b: i32) -> i32 {
        if b == 0 { a.abs() } else { gcd(b, a % b) }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in -2..=2 {
        for b in -2..=2 {
            for c in -2..=2 {
                if (a, b, c) == (0, 0, 0) {
                    continue;
                }
                let g = gcd(gcd(a, b), c);
                let v = [a / g, b / g, c / g];
                if seen.insert(v) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Push an integer normal into `G*` by shrinking all entries tied with the
/// dominant one (and everything smaller) by multiples of `δ`, then choose
/// `δ` as the largest power of two reciprocal that keeps the half-space
/// cutting at least the points the integer one cut.
fn into_gstar(nu: [i32; 3], k_int: &[Site], bbox: &LatticeBox) -> Option<HalfSpace> {
    let as_f = [nu[0] as f64, nu[1] as f64, nu[2] as f64];
    let support = |xi: &[f64; 3]| -> f64 {
        k_int
            .iter()
            .map(|k| xi[0] * k[0] as f64 + xi[1] * k[1] as f64 + xi[2] * k[2] as f64)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let cut_set = |hs: &HalfSpace| -> BTreeSet<Site> {
        bbox.iter().filter(|n| !hs.contains(n)).collect()
    };
    if Direction::new(as_f).map(|d| d.in_gstar()).unwrap_or(false) {
        return Some(HalfSpace { xi: as_f, level: support(&as_f) });
    }
    let ideal = HalfSpace { xi: as_f, level: support(&as_f) };
    let ideal_cut = cut_set(&ideal);
    // priority: larger |entry| first, earlier index breaks ties
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&i, &j| {
        nu[j]
            .abs()
            .cmp(&nu[i].abs())
            .then(i.cmp(&j))
    });
    for k in 1..=40u32 {
        let delta = 0.5f64.powi(k as i32);
        let mut xi = as_f;
        for (rank, &idx) in order.iter().enumerate() {
            xi[idx] *= 1.0 - rank as f64 * delta;
        }
        let Ok(dir) = Direction::new(xi) else { continue };
        if !dir.in_gstar() {
            continue;
        }
        let hs = HalfSpace { xi, level: support(&xi) };
        if cut_set(&hs).is_superset(&ideal_cut) {
            return Some(hs);
        }
    }
    None
}

/// Build a verified half-space cover of a convex lattice set.
///
/// The family always contains the six axis half-spaces at the support levels
/// of `K_int`; further normals are added greedily until the enumeration
/// identity `∩ P⁻(ξ,l) ∩ box = K_int` holds exactly.
pub fn halfspace_cover(k_int: &BTreeSet<Site>, bbox: &LatticeBox) -> Result<Vec<HalfSpace>> {
    if k_int.is_empty() {
        return Err(Error::Precondition("K_int must be nonempty".into()));
    }
    if !k_int.iter().all(|k| bbox.contains(k)) {
        return Err(Error::Precondition("K_int must lie inside the bounding box".into()));
    }
    let pts: Vec<Site> = k_int.iter().copied().collect();
    // convexity precondition: the box holds no hull point outside K_int
    for n in bbox.iter() {
        if !k_int.contains(&n) && in_convex_hull(&n, &pts) {
            return Err(Error::Precondition(format!(
                "K_int is not lattice-convex: {n:?} lies in its hull"
            )));
        }
    }

    let mut family: Vec<HalfSpace> = Vec::new();
    // six axis half-spaces at the K_int support levels (e_j ∈ G*)
    for a in 0..3 {
        for sgn in [1i32, -1] {
            let mut nu = [0i32; 3];
            nu[a] = sgn;
            let hs = into_gstar(nu, &pts, bbox).expect("axis vectors are in G*");
            family.push(hs);
        }
    }

    let mut remaining: BTreeSet<Site> = bbox
        .iter()
        .filter(|n| !k_int.contains(n) && family.iter().all(|hs| hs.contains(n)))
        .collect();

    if !remaining.is_empty() {
        let candidates: Vec<HalfSpace> = candidate_normals()
            .into_iter()
            .filter(|nu| nu.iter().filter(|v| **v != 0).count() > 1)
            .filter_map(|nu| into_gstar(nu, &pts, bbox))
            .collect();
        while !remaining.is_empty() {
            let mut best: Option<(usize, usize)> = None;
            for (i, hs) in candidates.iter().enumerate() {
                let cut = remaining.iter().filter(|n| !hs.contains(n)).count();
                if cut > 0 && best.map_or(true, |(_, c)| cut > c) {
                    best = Some((i, cut));
                }
            }
            let Some((i, _)) = best else {
                return Err(Error::Internal(format!(
                    "direction menu exhausted with {} uncovered points",
                    remaining.len()
                )));
            };
            let hs = candidates[i];
            remaining.retain(|n| hs.contains(n));
            family.push(hs);
        }
    }

    // final verification by enumeration
    verify_cover(k_int, bbox, &family)?;
    Ok(family)
}

/// Exhaustive check that `∩ P⁻ ∩ box = K_int`; exact, no tolerance beyond
/// the fixed comparison slack of [`HalfSpace::contains`].
pub fn verify_cover(
    k_int: &BTreeSet<Site>,
    bbox: &LatticeBox,
    family: &[HalfSpace],
) -> Result<()> {
    for hs in family {
        let dir = Direction::new(hs.xi)?;
        if !dir.in_gstar() {
            return Err(Error::Internal(format!("normal {:?} is not in G*", hs.xi)));
        }
    }
    for n in bbox.iter() {
        let inside = family.iter().all(|hs| hs.contains(&n));
        if inside != k_int.contains(&n) {
            return Err(Error::Internal(format!(
                "cover mismatch at {n:?}: halfspaces say {inside}, K_int says {}",
                !inside
            )));
        }
    }
    Ok(())
}

/// The lattice points of the ℓ¹ ball of given radius.
pub fn l1_ball(radius: i32) -> BTreeSet<Site> {
    let mut out = BTreeSet::new();
    for a in -radius..=radius {
        for b in -radius..=radius {
            for c in -radius..=radius {
                if a.abs() + b.abs() + c.abs() <= radius {
                    out.insert([a, b, c]);
                }
            }
        }
    }
    out
}
