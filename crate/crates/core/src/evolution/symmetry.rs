//! Exact symmetries of the equation: Galilean boosts and the scaling
//! `ũ(x, y, t) = λ u(λx, λy, λ²t)`.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::field::{GridSpec, WaveguideField};

/// Checks that `xi` lies on the box-dual lattice `(2π/L) Z²`.
pub fn check_dual_lattice(spec: &GridSpec, xi: [f64; 2]) -> Result<()> {
    let unit = TAU / spec.box_side;
    for x in xi {
        let m = x / unit;
        if !x.is_finite() || (m - m.round()).abs() > 1e-9 * m.abs().max(1.0) {
            return Err(Error::arg(format!("frequency {x} is not a multiple of 2π/L = {unit}")));
        }
    }
    Ok(())
}

/// Rounds `xi` to the nearest point of the box-dual lattice.
pub fn round_to_dual_lattice(spec: &GridSpec, xi: [f64; 2]) -> [f64; 2] {
    let unit = TAU / spec.box_side;
    [(xi[0] / unit).round() * unit, (xi[1] / unit).round() * unit]
}

/// Translation `u(z - a)` in the R² directions, applied spectrally.
pub fn translate_x(f: &WaveguideField, a: [f64; 2]) -> WaveguideField {
    let repr = f.repr();
    f.with_symbol(|z| C64::from_polar(1.0, -(z[0] * a[0] + z[1] * a[1]))).in_repr(repr)
}

/// Modulation `e^{i⟨x, ξ⟩} u` in physical space.
pub fn modulate_x(f: &WaveguideField, xi: [f64; 2]) -> WaveguideField {
    f.map_physical(|p, v| v * C64::from_polar(1.0, xi[0] * p[0] + xi[1] * p[1]))
}

/// `v(z) = e^{-i|ξ0|²t + i⟨z, ξ0⟩} u(z - 2ξ0 t)` in the R² directions.
pub fn galilean_boost(f: &WaveguideField, xi0: [f64; 2], t: f64) -> Result<WaveguideField> {
    check_dual_lattice(f.spec(), xi0)?;
    let shifted = translate_x(f, [2.0 * xi0[0] * t, 2.0 * xi0[1] * t]);
    let phase = C64::from_polar(1.0, -(xi0[0] * xi0[0] + xi0[1] * xi0[1]) * t);
    Ok(modulate_x(&shifted, xi0).scale(phase))
}

/// `λ = 2^m` for an integer `m` in `[-30, 30]`.
pub fn check_power_of_two(lam: f64) -> Result<i32> {
    if !(lam > 0.0) || !lam.is_finite() {
        return Err(Error::arg(format!("scale {lam} must be a positive power of two")));
    }
    let m = lam.log2().round();
    if m.abs() > 30.0 || 2f64.powi(m as i32) != lam {
        return Err(Error::arg(format!("scale {lam} must be a power of two")));
    }
    Ok(m as i32)
}

/// Grid for the rescaled solution: every length divided by `λ`, `dt` by `λ²`.
pub fn rescaled_grid(spec: &GridSpec, lam: f64) -> Result<GridSpec> {
    check_power_of_two(lam)?;
    GridSpec { box_side: spec.box_side / lam, nx: spec.nx, my: spec.my, dt: spec.dt / (lam * lam), torus_period: spec.torus_period / lam }
        .validate_into()
}

impl GridSpec {
    fn validate_into(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }
}

/// `ũ(x, y) = λ u(λx, λy)` on the rescaled grid `λ^{-1}(box × T²)`. The
/// map is exact: sample `i` of `ũ` is `λ` times sample `i` of `u`.
pub fn rescale_solution(f: &WaveguideField, lam: f64) -> Result<WaveguideField> {
    let spec = rescaled_grid(f.spec(), lam)?;
    f.physical().scale_real(lam).relabel(&spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::norms::{grad_sq, mass};

    fn spec() -> GridSpec {
        GridSpec::new(8.0, 16, 5, 0.01).unwrap()
    }

    fn bump(s: &GridSpec) -> WaveguideField {
        WaveguideField::from_fn(s, |p| C64::new((-(p[0] * p[0] + p[1] * p[1])).exp() * (1.0 + 0.5 * p[2].sin()), 0.1 * p[3].cos()))
    }

    #[test]
    fn boost_basics() {
        let s = spec();
        let f = bump(&s);
        assert!(galilean_boost(&f, [0.0, 0.0], 0.7).unwrap().max_abs_diff(&f).unwrap() < 1e-12);
        let xi = [TAU / 8.0, -2.0 * TAU / 8.0];
        let g = galilean_boost(&f, xi, 0.0).unwrap();
        assert!((mass(&g) - mass(&f)).abs() < 1e-12 * mass(&f));
        assert!(galilean_boost(&f, [0.3, 0.0], 0.0).is_err());
    }

    #[test]
    fn rescaling() {
        let s = spec();
        let f = bump(&s);
        assert!(rescale_solution(&f, 1.0).unwrap().max_abs_diff(&f).unwrap() == 0.0);
        for lam in [0.5, 2.0, 4.0] {
            let g = rescale_solution(&f, lam).unwrap();
            assert!((mass(&g) - mass(&f) / (lam * lam)).abs() < 1e-10 * mass(&f));
            assert!((grad_sq(&g) - grad_sq(&f)).abs() < 1e-10 * grad_sq(&f));
            assert!((g.spec().dt - s.dt / (lam * lam)).abs() < 1e-18);
        }
        assert!(rescale_solution(&f, 3.0).is_err());
        assert!(rescale_solution(&f, -2.0).is_err());
    }
}
