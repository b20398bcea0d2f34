use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::multiplier::{lp_project, resolved_shells};
use super::plane;
use super::resonant::ResonantState;
use super::waveguide::WaveguideField;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "name")]
pub enum NormKind {
    /// The mass `‖u‖²_{L²}`. Unlike the other kinds this one is quadratic.
    Mass,
    H1,
    H01,
    HS1S2 {
        s1: f64,
        s2: f64,
    },
    L4,
    /// Space-time norms; evaluated on trajectories, not single fields.
    WVec,
    ZPartial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub kind: NormKind,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<(f64, f64)>,
}

/// `volume · Σ w(ξ1, ξ2, k1, k2) |c|²`.
pub fn spectral_weighted_sq(f: &WaveguideField, w: impl Fn([f64; 4]) -> f64 + Sync) -> f64 {
    let s = f.spectral();
    let spec = s.spec();
    let fx = spec.x_axis().freqs();
    let fy = spec.y_axis().freqs();
    let (nx, my) = (spec.nx, spec.my);
    let data = s.data();
    spec.volume()
        * crate::par::sum_index(data.len(), |i| {
            let j2 = i % my;
            let j1 = (i / my) % my;
            let i2 = (i / (my * my)) % nx;
            let i1 = i / (my * my * nx);
            w([fx[i1], fx[i2], fy[j1], fy[j2]]) * data[i].norm_sqr()
        })
}

/// `‖u‖²_{L²}` by Plancherel.
pub fn mass(f: &WaveguideField) -> f64 {
    spectral_weighted_sq(f, |_| 1.0)
}

/// `‖∇u‖²_{L²}` over all four directions.
pub fn grad_sq(f: &WaveguideField) -> f64 {
    spectral_weighted_sq(f, |z| z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3])
}

pub fn grad_x_sq(f: &WaveguideField) -> f64 {
    spectral_weighted_sq(f, |z| z[0] * z[0] + z[1] * z[1])
}

pub fn grad_y_sq(f: &WaveguideField) -> f64 {
    spectral_weighted_sq(f, |z| z[2] * z[2] + z[3] * z[3])
}

/// `∫|u|⁴` with the cell-weighted physical sum.
pub fn l4_pow4(f: &WaveguideField) -> f64 {
    let p = f.physical();
    p.spec().cell_volume() * crate::par::sum_map(p.data(), |v| v.norm_sqr() * v.norm_sqr())
}

pub fn h1(f: &WaveguideField) -> f64 {
    spectral_weighted_sq(f, |z| 1.0 + z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3]).sqrt()
}

pub fn norm(f: &WaveguideField, kind: NormKind) -> Result<NormReport> {
    let value = match kind {
        NormKind::Mass => mass(f),
        NormKind::H1 => h1(f),
        NormKind::H01 => spectral_weighted_sq(f, |z| 1.0 + z[2] * z[2] + z[3] * z[3]).sqrt(),
        NormKind::HS1S2 { s1, s2 } => {
            spectral_weighted_sq(f, |z| (1.0 + z[0] * z[0] + z[1] * z[1]).powf(s1) * (1.0 + z[2] * z[2] + z[3] * z[3]).powf(s2)).sqrt()
        }
        NormKind::L4 => l4_pow4(f).powf(0.25),
        NormKind::WVec | NormKind::ZPartial => return Err(Error::arg(format!("{kind:?} is a space-time norm; use the trajectory estimators"))),
    };
    Ok(NormReport { kind, value, interval: None })
}

/// Uniformly sampled states `states[i]` at `times[i]`.
#[derive(Clone, Debug)]
pub struct Trajectory<T> {
    pub times: Vec<f64>,
    pub states: Vec<T>,
}

impl<T> Default for Trajectory<T> {
    fn default() -> Self {
        Trajectory { times: Vec::new(), states: Vec::new() }
    }
}

impl<T> Trajectory<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, t: f64, s: T) {
        self.times.push(t);
        self.states.push(s);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Sample index at time `t`, matched to a relative tolerance.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let span = self.times.last().copied().unwrap_or(0.0).abs().max(1.0);
        self.times.iter().position(|s| (s - t).abs() <= 1e-9 * span).ok_or(Error::TimeNotSampled(t))
    }

    pub fn at(&self, t: f64) -> Result<&T> {
        Ok(&self.states[self.index_of(t)?])
    }

    /// Indices of samples inside `[a, b]`.
    pub fn window(&self, interval: (f64, f64)) -> Vec<usize> {
        let tol = 1e-9 * interval.1.abs().max(1.0);
        (0..self.len()).filter(|&i| self.times[i] >= interval.0 - tol && self.times[i] <= interval.1 + tol).collect()
    }
}

/// Trapezoidal `∫ g dt` over consecutive samples.
pub(crate) fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times.windows(2).zip(values.windows(2)).map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1])).sum()
}

fn window_or_err<T>(traj: &Trajectory<T>, interval: (f64, f64)) -> Result<Vec<usize>> {
    if traj.is_empty() {
        return Err(Error::arg("empty trajectory"));
    }
    let idx = traj.window(interval);
    if idx.is_empty() {
        return Err(Error::arg(format!("no samples inside [{}, {}]", interval.0, interval.1)));
    }
    Ok(idx)
}

/// `Σ_N N² ‖P_N f‖⁴_{L⁴}` over the resolved shells: the integrand of the
/// fourth power of the Z-norm at one time.
pub fn z_density(f: &WaveguideField) -> f64 {
    resolved_shells(f.spec()).into_iter().map(|n| (n as f64).powi(2) * l4_pow4(&lp_project(f, n).expect("resolved shells are dyadic"))).sum()
}

/// `(∫_I z_density dt)^{1/4}` from sampled densities; a single sample is
/// treated as constant over the interval.
pub fn z_from_density(times: &[f64], density: &[f64], interval: (f64, f64)) -> f64 {
    let tol = 1e-9 * interval.1.abs().max(1.0);
    let (t, d): (Vec<f64>, Vec<f64>) =
        times.iter().zip(density).filter(|(t, _)| **t >= interval.0 - tol && **t <= interval.1 + tol).map(|(t, d)| (*t, *d)).unzip();
    let integral = match t.len() {
        0 => 0.0,
        1 => d[0] * (interval.1 - interval.0),
        _ => trapezoid(&t, &d),
    };
    integral.powf(0.25)
}

/// `(Σ_N N² ‖P_N u‖⁴_{L⁴(grid × I)})^{1/4}` over the resolved shells.
/// A single sample is treated as constant over the interval.
pub fn z_norm_estimate(traj: &Trajectory<WaveguideField>, interval: (f64, f64)) -> Result<NormReport> {
    let idx = window_or_err(traj, interval)?;
    let times: Vec<f64> = idx.iter().map(|&i| traj.times[i]).collect();
    let dens: Vec<f64> = idx.iter().map(|&i| z_density(&traj.states[i])).collect();
    Ok(NormReport { kind: NormKind::ZPartial, value: z_from_density(&times, &dens, interval), interval: Some(interval) })
}

/// `‖u_j‖⁴_{L⁴}` for every component, in state order.
pub fn w_components(v: &ResonantState) -> Vec<f64> {
    v.components().iter().map(|c| plane::l4_pow4(c, v.grid())).collect()
}

/// `(Σ_j ⟨j⟩² (∫_I ‖u_j‖⁴_{L⁴})^{1/2})^{1/2}` from sampled component values.
pub fn w_from_components(weights: &[f64], times: &[f64], values: &[Vec<f64>], interval: (f64, f64)) -> f64 {
    let tol = 1e-9 * interval.1.abs().max(1.0);
    let idx: Vec<usize> = (0..times.len()).filter(|&i| times[i] >= interval.0 - tol && times[i] <= interval.1 + tol).collect();
    let t: Vec<f64> = idx.iter().map(|&i| times[i]).collect();
    let mut total = 0.0;
    for (ci, w) in weights.iter().enumerate() {
        let vals: Vec<f64> = idx.iter().map(|&i| values[i][ci]).collect();
        let integral = match vals.len() {
            0 => 0.0,
            1 => vals[0] * (interval.1 - interval.0),
            _ => trapezoid(&t, &vals),
        };
        total += w * integral.sqrt();
    }
    total.sqrt()
}

/// `(Σ_j ⟨j⟩² ‖u_j‖²_{L⁴(grid × I)})^{1/2}`.
pub fn w_norm_estimate(traj: &Trajectory<ResonantState>, interval: (f64, f64)) -> Result<NormReport> {
    let idx = window_or_err(traj, interval)?;
    let first = &traj.states[idx[0]];
    let weights: Vec<f64> = first.points().map(|p| p.bracket_sq()).collect();
    let times: Vec<f64> = idx.iter().map(|&i| traj.times[i]).collect();
    let values: Vec<Vec<f64>> = idx.iter().map(|&i| w_components(&traj.states[i])).collect();
    Ok(NormReport { kind: NormKind::WVec, value: w_from_components(&weights, &times, &values, interval), interval: Some(interval) })
}

/// `‖f - g‖_{H¹}`.
pub fn h1_distance(f: &WaveguideField, g: &WaveguideField) -> Result<f64> {
    Ok(h1(&f.sub(g)?))
}

/// Complex `L²` inner product `∫ f ḡ`.
pub fn inner(f: &WaveguideField, g: &WaveguideField) -> Result<C64> {
    if !f.spec().same_shape(g.spec()) {
        return Err(Error::GridMismatch("inner product across grids".into()));
    }
    let (a, b) = (f.spectral(), g.spectral());
    let re = crate::par::sum_index(a.data().len(), |i| (a.data()[i] * b.data()[i].conj()).re);
    let im = crate::par::sum_index(a.data().len(), |i| (a.data()[i] * b.data()[i].conj()).im);
    Ok(C64::new(re, im) * f.spec().volume())
}
