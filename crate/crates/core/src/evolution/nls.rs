//! Strang splitting for `(i∂_t + Δ)u = ρ|u|²u`.
//!
//! One step is a half linear step, the exact pointwise flow of the
//! nonlinearity `u ← u·e^{-iρ dt|u|²}`, the de-aliasing mask, and another
//! half linear step. Both sub-flows are unitary, which is what keeps the
//! mass drift at rounding level.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::linear::linear_symbol;
use crate::diagnostics::conserved::{conserved_set, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::field::{Dealias, GridSpec, Trajectory, WaveguideField};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NlsScheme {
    #[default]
    StrangSplit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NlsStepperConfig {
    pub dt: f64,
    #[serde(default)]
    pub scheme: NlsScheme,
    #[serde(default)]
    pub dealias: Dealias,
    /// The switch ρ ∈ {0, 1}; the nonlinearity is always defocusing.
    #[serde(default = "yes")]
    pub nonlinear: bool,
}

fn yes() -> bool {
    true
}

impl NlsStepperConfig {
    pub fn new(dt: f64) -> Result<Self> {
        let c = NlsStepperConfig { dt, scheme: NlsScheme::StrangSplit, dealias: Dealias::Box, nonlinear: true };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::arg(format!("dt must be > 0, got {}", self.dt)));
        }
        Ok(())
    }

    pub fn with_dealias(mut self, d: Dealias) -> Self {
        self.dealias = d;
        self
    }

    pub fn linear_only(mut self) -> Self {
        self.nonlinear = false;
        self
    }
}

/// A stepper with its multipliers tabulated for one grid.
#[derive(Clone, Debug)]
pub struct NlsStepper {
    spec: GridSpec,
    dt: f64,
    nonlinear: bool,
    half: Vec<C64>,
    masked_half: Vec<C64>,
    steps_taken: usize,
}

impl NlsStepper {
    pub fn new(spec: &GridSpec, cfg: &NlsStepperConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self::with_signed_dt(spec, cfg.dt, cfg.nonlinear, cfg.dealias))
    }

    fn with_signed_dt(spec: &GridSpec, dt: f64, nonlinear: bool, dealias: Dealias) -> Self {
        let lin = linear_symbol(dt / 2.0);
        let half = WaveguideField::symbol_table(spec, &lin);
        let masked_half = match dealias.mask(spec) {
            Some(m) => WaveguideField::symbol_table(spec, |z| lin(z) * m(z)),
            None => half.clone(),
        };
        NlsStepper { spec: spec.clone(), dt, nonlinear, half, masked_half, steps_taken: 0 }
    }

    /// The same scheme run backwards in time (step `-dt`).
    pub fn reversed(&self) -> Self {
        let mut r = self.clone();
        r.dt = -self.dt;
        r.half.iter_mut().for_each(|v| *v = v.conj());
        r.masked_half.iter_mut().for_each(|v| *v = v.conj());
        r.steps_taken = 0;
        r
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances one step; the result is in physical representation.
    pub fn step(&mut self, f: &WaveguideField) -> Result<WaveguideField> {
        if !f.spec().same_shape(&self.spec) {
            return Err(Error::GridMismatch("stepper built for another grid".into()));
        }
        let mut u = f.clone();
        u.multiply_spectral(&self.half);
        let mut u = u.into_physical();
        if self.nonlinear {
            let dt = self.dt;
            u.data_mut().par_iter_mut().for_each(|v| *v *= C64::from_polar(1.0, -dt * v.norm_sqr()));
        }
        u.multiply_spectral(&self.masked_half);
        let u = u.into_physical();
        self.steps_taken += 1;
        if !u.is_finite() {
            return Err(Error::NonFinite { context: "nls step", step: self.steps_taken });
        }
        Ok(u)
    }
}

/// One Strang step of the cubic NLS.
pub fn step_nls(f: &WaveguideField, cfg: &NlsStepperConfig) -> Result<WaveguideField> {
    NlsStepper::new(f.spec(), cfg)?.step(f)
}

#[derive(Clone, Debug)]
pub struct EvolveOptions {
    /// Observers and records fire every `stride` steps.
    pub stride: usize,
    pub keep_trajectory: bool,
    pub record_diagnostics: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { stride: 1, keep_trajectory: false, record_diagnostics: true }
    }
}

#[derive(Clone, Debug)]
pub struct Evolution {
    pub final_state: WaveguideField,
    /// One record per observed step, starting after the first stride.
    pub records: Vec<DiagnosticsRecord>,
    /// Includes the initial state when kept.
    pub trajectory: Trajectory<WaveguideField>,
}

/// Number of fixed steps covering `[0, t_final]`.
pub fn step_count(t_final: f64, dt: f64) -> Result<usize> {
    if !(t_final > 0.0) {
        return Err(Error::arg(format!("final time must be > 0, got {t_final}")));
    }
    let n = (t_final / dt).round();
    if n < 1.0 || ((n * dt - t_final).abs() > 1e-9 * t_final.max(1.0)) {
        return Err(Error::arg(format!("final time {t_final} is not a whole number of steps of {dt}")));
    }
    Ok(n as usize)
}

/// Called with `(step, time, state)` every stride.
pub type NlsObserver<'a> = &'a mut dyn FnMut(usize, f64, &WaveguideField);

/// Fixed-step evolution with an optional observer `(step, time, state)`.
pub fn evolve_nls(
    f0: &WaveguideField,
    t_final: f64,
    cfg: &NlsStepperConfig,
    opts: &EvolveOptions,
    mut observer: Option<NlsObserver<'_>>,
) -> Result<Evolution> {
    let n = step_count(t_final, cfg.dt)?;
    let stride = opts.stride.max(1);
    let mut stepper = NlsStepper::new(f0.spec(), cfg)?;
    let mut u = f0.physical();
    let mut out = Evolution { final_state: u.clone(), records: Vec::new(), trajectory: Trajectory::new() };
    if opts.keep_trajectory {
        out.trajectory.push(0.0, u.clone());
    }
    for k in 1..=n {
        u = stepper.step(&u)?;
        if k % stride == 0 || k == n {
            let t = k as f64 * cfg.dt;
            if opts.record_diagnostics {
                out.records.push(DiagnosticsRecord::from_set(k, t, &conserved_set(&u)));
            }
            if opts.keep_trajectory {
                out.trajectory.push(t, u.clone());
            }
            if let Some(obs) = observer.as_mut() {
                obs(k, t, &u);
            }
        }
    }
    out.final_state = u;
    Ok(out)
}
