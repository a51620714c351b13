//! Dense 3D DFT helpers on the uniform torus grid.
//!
//! Grid layout: index `(i1, i2, i3) ↦ (i1*n + i2)*n + i3` with sample points
//! `x_j = 2π i_j / n`. The forward transform computes plain DFT sums
//! `F[k] = Σ_i f[i] e^{-2πi k·i/n}`, so the trigonometric-polynomial
//! coefficient at frequency `m` (of `e^{i m·x}`) of a band-limited `f` is
//! `F[m mod n] / n³`.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Forward DFT along all three axes, in place.
pub fn fft3_forward(data: &mut [Complex64], n: usize) {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    fft3_apply(data, n, fft);
}

/// Inverse DFT along all three axes, in place, including the `1/n³` factor.
pub fn fft3_inverse(data: &mut [Complex64], n: usize) {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_inverse(n);
    fft3_apply(data, n, fft);
    let scale = 1.0 / (n * n * n) as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

fn fft3_apply(data: &mut [Complex64], n: usize, fft: Arc<dyn Fft<f64>>) {
    assert_eq!(data.len(), n * n * n);
    let mut line = vec![Complex64::ZERO; n];
    // axis 3 (contiguous)
    for chunk in data.chunks_exact_mut(n) {
        fft.process(chunk);
    }
    // axis 2 (stride n)
    for i1 in 0..n {
        for i3 in 0..n {
            let base = i1 * n * n + i3;
            for i2 in 0..n {
                line[i2] = data[base + i2 * n];
            }
            fft.process(&mut line);
            for i2 in 0..n {
                data[base + i2 * n] = line[i2];
            }
        }
    }
    // axis 1 (stride n²)
    for i2 in 0..n {
        for i3 in 0..n {
            let base = i2 * n + i3;
            for i1 in 0..n {
                line[i1] = data[base + i1 * n * n];
            }
            fft.process(&mut line);
            for i1 in 0..n {
                data[base + i1 * n * n] = line[i1];
            }
        }
    }
}

/// Map a DFT bin to its signed frequency in `(-n/2, n/2]`.
pub fn signed_freq(bin: usize, n: usize) -> i32 {
    let half = n / 2;
    if bin <= half {
        bin as i32
    } else {
        bin as i32 - n as i32
    }
}

/// Map a signed frequency to its DFT bin.
pub fn bin_of_freq(freq: i32, n: usize) -> usize {
    freq.rem_euclid(n as i32) as usize
}

/// Flat index of a grid point.
pub fn grid_index(i: [usize; 3], n: usize) -> usize {
    (i[0] * n + i[1]) * n + i[2]
}

/// The torus point of a grid index.
pub fn grid_point(i: [usize; 3], n: usize) -> [f64; 3] {
    let h = std::f64::consts::TAU / n as f64;
    [i[0] as f64 * h, i[1] as f64 * h, i[2] as f64 * h]
}

/// Iterate all grid multi-indices in layout order.
pub fn grid_iter(n: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..n).flat_map(move |i1| (0..n).flat_map(move |i2| (0..n).map(move |i3| [i1, i2, i3])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn forward_recovers_plane_wave_coefficient() {
        let n = 8;
        let freq = [2i32, -1, 3];
        let mut data = vec![Complex64::ZERO; n * n * n];
        for i in grid_iter(n) {
            let x = grid_point(i, n);
            let phase = freq[0] as f64 * x[0] + freq[1] as f64 * x[1] + freq[2] as f64 * x[2];
            data[grid_index(i, n)] = Complex64::new(0.0, phase).exp() * 2.5;
        }
        fft3_forward(&mut data, n);
        let scale = (n * n * n) as f64;
        let bin = [
            bin_of_freq(freq[0], n),
            bin_of_freq(freq[1], n),
            bin_of_freq(freq[2], n),
        ];
        let c = data[grid_index(bin, n)] / scale;
        assert_abs_diff_eq!(c.re, 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c.im, 0.0, epsilon = 1e-12);
        // everything else vanishes
        let total: f64 = data.iter().map(|v| v.norm_sqr()).sum();
        assert_abs_diff_eq!(total / (scale * scale), 2.5 * 2.5, epsilon = 1e-10);
    }

    #[test]
    fn roundtrip() {
        let n = 4;
        let orig: Vec<Complex64> = (0..n * n * n)
            .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos()))
            .collect();
        let mut data = orig.clone();
        fft3_forward(&mut data, n);
        fft3_inverse(&mut data, n);
        for (a, b) in orig.iter().zip(&data) {
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-12);
        }
    }
}
