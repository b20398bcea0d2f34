//! Helpers for complex arrays on the 2-D box, stored row-major `(x1, x2)`.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::grid::Grid2;
use super::transform;

pub fn forward(data: &mut [C64], g: &Grid2) {
    let ax = g.axis();
    transform::forward(data, &[g.nx, g.nx], &[ax, ax], &[0, 1]);
}

pub fn backward(data: &mut [C64], g: &Grid2) {
    let ax = g.axis();
    transform::backward(data, &[g.nx, g.nx], &[ax, ax], &[0, 1]);
}

/// Multiplies spectral coefficients by `symbol(ξ1, ξ2)`.
pub fn apply_symbol(data: &mut [C64], g: &Grid2, symbol: impl Fn(f64, f64) -> C64 + Sync) {
    let f = g.axis().freqs();
    data.par_chunks_mut(g.nx).enumerate().for_each(|(i1, row)| {
        for (i2, v) in row.iter_mut().enumerate() {
            *v *= symbol(f[i1], f[i2]);
        }
    });
}

/// Applies a Fourier multiplier to physical samples.
pub fn filter(data: &[C64], g: &Grid2, symbol: impl Fn(f64, f64) -> C64 + Sync) -> Vec<C64> {
    let mut out = data.to_vec();
    forward(&mut out, g);
    apply_symbol(&mut out, g, symbol);
    backward(&mut out, g);
    out
}

pub fn l2_sq(data: &[C64], g: &Grid2) -> f64 {
    g.cell_area() * crate::par::sum_map(data, |v| v.norm_sqr())
}

/// `area · Σ w(ξ)|c(ξ)|²` for physical samples.
pub fn weighted_sq(data: &[C64], g: &Grid2, w: impl Fn(f64, f64) -> f64 + Sync) -> f64 {
    let mut c = data.to_vec();
    forward(&mut c, g);
    let f = g.axis().freqs();
    let nx = g.nx;
    g.area() * crate::par::sum_index(c.len(), |i| w(f[i / nx], f[i % nx]) * c[i].norm_sqr())
}

/// `‖v‖²_{H^k}` with weight `⟨ξ⟩^{2k}`.
pub fn sobolev_sq(data: &[C64], g: &Grid2, k: f64) -> f64 {
    weighted_sq(data, g, |a, b| (1.0 + a * a + b * b).powf(k))
}

pub fn l4_pow4(data: &[C64], g: &Grid2) -> f64 {
    g.cell_area() * crate::par::sum_map(data, |v| v.norm_sqr() * v.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plancherel_on_the_plane() {
        let g = Grid2::new(5.0, 16).unwrap();
        let data: Vec<C64> = (0..256).map(|i| C64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect();
        let a = l2_sq(&data, &g);
        let b = sobolev_sq(&data, &g, 0.0);
        assert!((a - b).abs() <= 1e-12 * a);
    }
}
