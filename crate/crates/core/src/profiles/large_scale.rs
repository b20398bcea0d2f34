//! Large-scale profiles `T_M ψ(x, y) = M ψ̃(Mx, y)`, `ψ̃ = P^x_{≤M^{-1/100}} ψ`,
//! and the reconstruction `V_M` of a waveguide field from the resonant
//! system.
//!
//! `M` is a power of two and the target grid is `ψ`'s grid with the R² box
//! divided by `M`, so the stretch is an exact index map.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::evolution::symmetry::check_power_of_two;
use crate::field::{eta, GridSpec, ResonantState, WaveguideField};

/// Exponent of the x-low-pass threshold `M^{-1/100}`.
pub const LOWPASS_EXPONENT: f64 = 0.01;

#[derive(Clone, Debug)]
pub struct LargeScaleProfileSpec {
    /// The generator, in `H^{0,1}`.
    pub psi: WaveguideField,
    pub m: f64,
}

/// `M ∈ (0, 1]`, a power of two.
pub fn check_large_scale(m: f64) -> Result<()> {
    if !(m > 0.0 && m <= 1.0) {
        return Err(Error::arg(format!("M must lie in (0, 1], got {m}")));
    }
    check_power_of_two(m).map(|_| ())
}

/// `ψ`'s grid with the R² box stretched by `1/M`.
pub fn stretched_grid(spec: &GridSpec, m: f64) -> Result<GridSpec> {
    check_large_scale(m)?;
    let g = GridSpec { box_side: spec.box_side / m, ..spec.clone() };
    g.validate()?;
    Ok(g)
}

impl LargeScaleProfileSpec {
    pub fn new(psi: WaveguideField, m: f64) -> Result<Self> {
        check_large_scale(m)?;
        Ok(LargeScaleProfileSpec { psi, m })
    }

    /// `P^x_{≤M^{-1/100}} ψ` with the smooth cumulative cutoff in `|ξ_x|`.
    pub fn lowpassed(&self) -> WaveguideField {
        let k = self.m.powf(-LOWPASS_EXPONENT);
        self.psi.with_symbol(|z| C64::new(eta((z[0] * z[0] + z[1] * z[1]).sqrt() / k), 0.0)).into_physical()
    }
}

pub fn large_scale_profile(spec: &LargeScaleProfileSpec) -> Result<WaveguideField> {
    let target = stretched_grid(spec.psi.spec(), spec.m)?;
    spec.lowpassed().scale_real(spec.m).relabel(&target)
}

/// `V_M(x, y, t) = Σ_q e^{-it|q|²} e^{i⟨y, q⟩} M v_q(Mx, M²t)` on `target`.
/// `v` is the resonant state at resonant time `M²t`.
pub fn reconstruct_from_resonant(v: &ResonantState, m: f64, t: f64, target: &GridSpec) -> Result<WaveguideField> {
    check_large_scale(m)?;
    let want = v.grid().box_side / m;
    if (target.box_side - want).abs() > 1e-12 * want {
        return Err(Error::GridMismatch(format!("target box {} is not the resonant box {} stretched by 1/M", target.box_side, v.grid().box_side)));
    }
    v.synthesize(target, |q| C64::from_polar(m, -t * q.norm_sq() as f64))
}
