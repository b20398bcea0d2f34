//! Fourier-series coefficients on shifted periodic grids.
//!
//! For an axis with points `x_i = x0 + i h` the stored coefficient at
//! frequency `ξ` is `c(ξ) = n⁻¹ Σ_i u(x_i) e^{-iξ x_i}`, so that
//! `u(x) = Σ_ξ c(ξ) e^{iξx}` exactly on the grid. The origin phase is what
//! makes a plane wave `e^{iξx}` produce a coefficient of exactly 1.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::fft::transform_axes;
use super::grid::Axis;

fn scale_axis(data: &mut [C64], shape: &[usize], axis: usize, factors: &[C64]) {
    let n = shape[axis];
    let stride: usize = shape[axis + 1..].iter().product();
    data.par_chunks_mut(n * stride).for_each(|blk| {
        for (k, f) in factors.iter().enumerate() {
            for v in &mut blk[k * stride..(k + 1) * stride] {
                *v *= f;
            }
        }
    });
}

fn phases(ax: &Axis, forward: bool) -> Vec<C64> {
    (0..ax.n)
        .map(|k| {
            let p = C64::from_polar(1.0, -ax.freq(k) * ax.origin);
            if forward {
                p / ax.n as f64
            } else {
                p.conj()
            }
        })
        .collect()
}

/// Physical samples to coefficients along the listed axes.
pub fn forward(data: &mut [C64], shape: &[usize], axes: &[Axis], which: &[usize]) {
    transform_axes(data, shape, which, false);
    for &a in which {
        scale_axis(data, shape, a, &phases(&axes[a], true));
    }
}

/// Coefficients to physical samples along the listed axes.
pub fn backward(data: &mut [C64], shape: &[usize], axes: &[Axis], which: &[usize]) {
    for &a in which {
        scale_axis(data, shape, a, &phases(&axes[a], false));
    }
    transform_axes(data, shape, which, true);
}
