//! Frames `(scale, t0, x0, ξ)` and their action
//! `f ↦ (e^{-it0Δ}(e^{i⟨ξ, x⟩} f))(· − x0)`.
//!
//! The scale is carried by the profile constructors; `frame_apply` acts with
//! the isometric part only. Two applications compose to one up to a phase:
//! `F1 ∘ F0 = e^{i(⟨ξ1, a0⟩ + t0|ξ1|²)} (t0 + t1, a0 + a1 + 2t0ξ1, ξ0 + ξ1)`
//! with `a = x0` restricted to its R² part.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::linear::linear_symbol;
use crate::evolution::symmetry::{check_dual_lattice, modulate_x};
use crate::field::{GridSpec, WaveguideField};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameElement {
    pub scale: f64,
    pub t0: f64,
    /// Position in R²×T².
    pub x0: [f64; 4],
    /// Frequency in the R² directions.
    pub xi: [f64; 2],
}

impl Default for FrameElement {
    fn default() -> Self {
        FrameElement { scale: 1.0, t0: 0.0, x0: [0.0; 4], xi: [0.0; 2] }
    }
}

impl FrameElement {
    pub fn new(scale: f64, t0: f64, x0: [f64; 4], xi: [f64; 2]) -> Result<Self> {
        let f = FrameElement { scale, t0, x0, xi };
        f.validate()?;
        Ok(f)
    }

    /// A large-scale frame: scale `M ≤ 1` and no torus shift.
    pub fn large_scale(m: f64, t0: f64, x: [f64; 2], xi: [f64; 2]) -> Result<Self> {
        if !(m <= 1.0) {
            return Err(Error::arg(format!("large-scale frames need M <= 1, got {m}")));
        }
        Self::new(m, t0, [x[0], x[1], 0.0, 0.0], xi)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::arg(format!("frame scale must be > 0, got {}", self.scale)));
        }
        if !self.t0.is_finite() || self.x0.iter().chain(&self.xi).any(|v| !v.is_finite()) {
            return Err(Error::arg("frame parameters must be finite"));
        }
        Ok(())
    }

    /// Parameters of `self ∘ inner` and the phase in front of it.
    pub fn compose(&self, inner: &FrameElement) -> (FrameElement, C64) {
        let (t0, a0, x0) = (inner.t0, inner.x0, inner.xi);
        let xi1 = self.xi;
        let phase = xi1[0] * a0[0] + xi1[1] * a0[1] + t0 * (xi1[0] * xi1[0] + xi1[1] * xi1[1]);
        let frame = FrameElement {
            scale: self.scale * inner.scale,
            t0: t0 + self.t0,
            x0: [a0[0] + self.x0[0] + 2.0 * t0 * xi1[0], a0[1] + self.x0[1] + 2.0 * t0 * xi1[1], a0[2] + self.x0[2], a0[3] + self.x0[3]],
            xi: [x0[0] + xi1[0], x0[1] + xi1[1]],
        };
        (frame, C64::from_polar(1.0, phase))
    }
}

fn check_shift(spec: &GridSpec, x0: [f64; 4]) -> Result<()> {
    let h = [spec.hx(), spec.hx(), spec.hy(), spec.hy()];
    for (v, h) in x0.iter().zip(h) {
        let m = v / h;
        if (m - m.round()).abs() > 1e-9 * m.abs().max(1.0) {
            return Err(Error::arg(format!("shift {v} is not a multiple of the grid spacing {h}")));
        }
    }
    Ok(())
}

fn shift(f: &WaveguideField, x0: [f64; 4]) -> WaveguideField {
    f.with_symbol(|z| C64::from_polar(1.0, -(z[0] * x0[0] + z[1] * x0[1] + z[2] * x0[2] + z[3] * x0[3])))
}

/// `(e^{-it0Δ}(e^{i⟨ξ, x⟩} f))(· − x0)`, returned in physical representation.
pub fn frame_apply(f: &WaveguideField, frame: &FrameElement) -> Result<WaveguideField> {
    frame.validate()?;
    check_dual_lattice(f.spec(), frame.xi)?;
    check_shift(f.spec(), frame.x0)?;
    let modulated = if frame.xi == [0.0, 0.0] { f.clone() } else { modulate_x(f, frame.xi) };
    let evolved = modulated.with_symbol(linear_symbol(-frame.t0));
    Ok(shift(&evolved, frame.x0).into_physical())
}

/// The inverse `e^{-i⟨ξ, x⟩} e^{it0Δ} f(· + x0)`.
pub fn frame_apply_inverse(f: &WaveguideField, frame: &FrameElement) -> Result<WaveguideField> {
    frame.validate()?;
    check_dual_lattice(f.spec(), frame.xi)?;
    check_shift(f.spec(), frame.x0)?;
    let back = shift(f, frame.x0.map(|v| -v)).with_symbol(linear_symbol(frame.t0)).into_physical();
    Ok(if frame.xi == [0.0, 0.0] { back } else { modulate_x(&back, frame.xi.map(|v| -v)) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::norms::{h1, mass};
    use std::f64::consts::TAU;

    fn spec() -> GridSpec {
        GridSpec::new(8.0, 16, 5, 0.1).unwrap()
    }

    fn bump(s: &GridSpec) -> WaveguideField {
        WaveguideField::from_fn(s, |p| C64::new((-(p[0] * p[0] + 2.0 * p[1] * p[1])).exp() * (1.0 + 0.4 * p[2].cos()), 0.2 * p[3].sin()))
    }

    #[test]
    fn identity_frame() {
        let s = spec();
        let f = bump(&s);
        let g = frame_apply(&f, &FrameElement::default()).unwrap();
        assert!(g.max_abs_diff(&f).unwrap() < 1e-12);
    }

    #[test]
    fn isometry_and_inverse() {
        let s = spec();
        let f = bump(&s);
        let fr = FrameElement::new(1.0, 0.3, [s.hx(), -2.0 * s.hx(), s.hy(), 0.0], [0.0, 0.0]).unwrap();
        let g = frame_apply(&f, &fr).unwrap();
        assert!((mass(&g) - mass(&f)).abs() < 1e-10 * mass(&f));
        assert!((h1(&g) - h1(&f)).abs() < 1e-10 * h1(&f));
        let boosted = FrameElement { xi: [TAU / 8.0, 0.0], ..fr };
        let back = frame_apply_inverse(&frame_apply(&f, &boosted).unwrap(), &boosted).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-10);
    }

    #[test]
    fn composition_law() {
        let s = spec();
        let f = bump(&s);
        let u = TAU / 8.0;
        let f0 = FrameElement::new(1.0, 0.2, [2.0 * s.hx(), 0.0, 0.0, s.hy()], [u, 0.0]).unwrap();
        let f1 = FrameElement::new(1.0, 0.15, [0.0, s.hx(), 0.0, 0.0], [0.0, -u]).unwrap();
        // keep the composed shift on the grid: 2·t0·ξ1 must be a multiple of h
        let f0 = FrameElement { t0: s.hx() / (2.0 * u), ..f0 };
        let twice = frame_apply(&frame_apply(&f, &f0).unwrap(), &f1).unwrap();
        let (c, phase) = f1.compose(&f0);
        let once = frame_apply(&f, &c).unwrap().scale(phase);
        assert!(twice.max_abs_diff(&once).unwrap() < 1e-10);
    }

    #[test]
    fn off_lattice_rejected() {
        let s = spec();
        let f = bump(&s);
        assert!(frame_apply(&f, &FrameElement { xi: [0.3, 0.0], ..Default::default() }).is_err());
        assert!(frame_apply(&f, &FrameElement { x0: [0.1, 0.0, 0.0, 0.0], ..Default::default() }).is_err());
        assert!(FrameElement::new(0.0, 0.0, [0.0; 4], [0.0; 2]).is_err());
        assert!(FrameElement::large_scale(2.0, 0.0, [0.0; 2], [0.0; 2]).is_err());
    }
}
