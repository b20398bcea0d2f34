//! Approximation experiments: the waveguide NLS started from a profile
//! against the solution assembled from the limiting model (the resonant
//! system for large-scale profiles, the 4-D equation for Euclidean ones).
//!
//! Errors are sup-in-time `H¹` distances over the simulated window, a
//! computable stand-in for the `X¹` norm, together with the same quantity
//! relative to `sup ‖U‖_{H¹}`.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::euclidean::{euclidean_profile, EuclideanProfileSpec};
use super::large_scale::{large_scale_profile, reconstruct_from_resonant, LargeScaleProfileSpec};
use crate::error::{Error, Result};
use crate::evolution::nls::step_count;
use crate::evolution::{NlsStepper, NlsStepperConfig, ResonantStepper, ResonantStepperConfig};
use crate::field::norms::{h1, h1_distance, trapezoid};
use crate::field::{eta, plane, Dealias, GridSpec, ResonantState, WaveguideField};
use crate::lattice::{non_resonant_triples, LatticePoint, ResonanceTable, ResonantTriple};

/// Largest 4-D grid the Euclidean experiment accepts.
pub const MAX_EUCLIDEAN_POINTS_PER_AXIS: usize = 32;

/// One leg of an experiment, one CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub scale: f64,
    pub time_horizon: f64,
    pub sup_h1_error: f64,
    pub rel_error: f64,
    pub residual_proxy: Option<f64>,
    pub wall_seconds: f64,
    /// `sup_t ‖U(t)‖_{H¹} / ‖U(0)‖_{H¹}`; not part of the CSV.
    #[serde(skip)]
    pub h1_growth: f64,
}

fn elapsed(start: Instant) -> f64 {
    if crate::par::deterministic() {
        0.0
    } else {
        start.elapsed().as_secs_f64()
    }
}

fn guard(steps: usize, ceiling: usize, what: &str) -> Result<()> {
    if steps > ceiling {
        return Err(Error::ResourceGuard(format!("{what} needs {steps} steps, above the ceiling of {ceiling}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LsExperimentConfig {
    /// Horizon in resonant time; the waveguide runs to `T0·M^{-2}`.
    pub t0: f64,
    /// Waveguide time step; the resonant step is `M²·dt`.
    pub dt: f64,
    /// Torus truncation of the resonant system.
    pub trunc: i64,
    #[serde(default = "yes")]
    pub nonlinear: bool,
    #[serde(default = "default_ceiling")]
    pub max_steps: usize,
}

fn yes() -> bool {
    true
}

fn default_ceiling() -> usize {
    20_000
}

type NrMap = Vec<(LatticePoint, Vec<ResonantTriple>)>;

fn nr_map(trunc: i64) -> Result<NrMap> {
    Ok(non_resonant_triples(trunc)?.into_iter().map(|(q, v)| (q, v.into_iter().map(|(t, _)| t).collect())).collect())
}

/// `Σ_q (1+|q|²)‖G_q‖²` and `Σ_q ‖∇G_q‖²` for the non-resonant forcing
/// `G_q = Σ_{NR(q)} v_{p1} v̄_{p2} v_{p3}`.
fn nr_forcing(v: &ResonantState, map: &NrMap) -> (f64, f64) {
    let g = *v.grid();
    let parts: Vec<(f64, f64)> = map
        .par_iter()
        .map(|(q, triples)| {
            let mut acc = vec![C64::new(0.0, 0.0); g.len()];
            let mut any = false;
            for t in triples {
                let (a, b, c) = match (v.component(t.j1), v.component(t.j2), v.component(t.j3)) {
                    (Some(a), Some(b), Some(c)) => (a, b, c),
                    _ => continue,
                };
                if a.iter().all(|z| *z == C64::new(0.0, 0.0))
                    || b.iter().all(|z| *z == C64::new(0.0, 0.0))
                    || c.iter().all(|z| *z == C64::new(0.0, 0.0))
                {
                    continue;
                }
                any = true;
                for i in 0..acc.len() {
                    acc[i] += a[i] * b[i].conj() * c[i];
                }
            }
            if !any {
                return (0.0, 0.0);
            }
            let l2 = plane::l2_sq(&acc, &g);
            let grad = plane::weighted_sq(&acc, &g, |x, y| x * x + y * y);
            ((1.0 + q.norm_sq() as f64) * l2, grad)
        })
        .collect();
    parts.iter().fold((0.0, 0.0), |s, p| (s.0 + p.0, s.1 + p.1))
}

/// Nonzero components only, to keep the map small.
fn live_points(v: &ResonantState) -> usize {
    v.components().iter().filter(|c| c.iter().any(|z| z.norm_sqr() > 0.0)).count()
}

/// One leg at scale `M`.
pub fn ls_leg(psi: &WaveguideField, m: f64, cfg: &LsExperimentConfig) -> Result<ExperimentRow> {
    let start = Instant::now();
    let ls = LargeScaleProfileSpec::new(psi.clone(), m)?;
    let f0 = large_scale_profile(&ls)?;
    let horizon = cfg.t0 / (m * m);
    let n = step_count(horizon, cfg.dt)?;
    guard(n, cfg.max_steps, "the large-scale leg")?;
    let target = f0.spec().clone().with_dt(cfg.dt)?;
    let f0 = f0.relabel(&target)?;

    let v0 = ResonantState::from_waveguide(&ls.lowpassed(), cfg.trunc)?;
    let table = Arc::new(ResonanceTable::build(cfg.trunc)?);
    let mut rcfg = ResonantStepperConfig::new(m * m * cfg.dt, table)?;
    rcfg.nonlinear = cfg.nonlinear;
    let mut rs = ResonantStepper::new(&v0, &rcfg)?;
    let mut ncfg = NlsStepperConfig::new(cfg.dt)?.with_dealias(Dealias::Box);
    ncfg.nonlinear = cfg.nonlinear;
    let mut ns = NlsStepper::new(&target, &ncfg)?;
    let map = if cfg.nonlinear && live_points(&v0) > 0 { nr_map(cfg.trunc)? } else { Vec::new() };

    let (mut u, mut v) = (f0.clone(), v0);
    let (mut sup_err, mut sup_u) = (0.0f64, h1(&u));
    let u0 = sup_u;
    let (mut s_times, mut forcing) = (Vec::with_capacity(n + 1), Vec::with_capacity(n + 1));
    let m2 = m * m;
    for k in 0..=n {
        if k > 0 {
            u = ns.step(&u)?;
            v = rs.step(&v)?;
        }
        let t = k as f64 * cfg.dt;
        let vm = reconstruct_from_resonant(&v, m, t, &target)?;
        sup_err = sup_err.max(h1_distance(&u, &vm)?);
        sup_u = sup_u.max(h1(&u));
        if !map.is_empty() {
            let (a, b) = nr_forcing(&v, &map);
            s_times.push(t * m2);
            forcing.push(m2 * a + m2 * m2 * b);
        }
    }
    // ‖F‖²_{L²_t H¹} = |T²| ∫_0^{T0} (M²A + M⁴B) ds in resonant time
    let residual = if map.is_empty() { 0.0 } else { (target.torus_area() * trapezoid(&s_times, &forcing)).sqrt() };
    Ok(ExperimentRow {
        scale: m,
        time_horizon: horizon,
        sup_h1_error: sup_err,
        rel_error: if sup_u > 0.0 { sup_err / sup_u } else { 0.0 },
        residual_proxy: Some(residual),
        wall_seconds: elapsed(start),
        h1_growth: if u0 > 0.0 { sup_u / u0 } else { 1.0 },
    })
}

/// Runs every `M` in `ms` (in parallel) and returns rows in input order.
pub fn ls_approximation_experiment(psi: &WaveguideField, ms: &[f64], cfg: &LsExperimentConfig) -> Result<Vec<ExperimentRow>> {
    if ms.is_empty() {
        return Err(Error::arg("no M values given"));
    }
    if !(cfg.t0 > 0.0) {
        return Err(Error::arg(format!("t0 must be > 0, got {}", cfg.t0)));
    }
    ms.par_iter().map(|&m| ls_leg(psi, m, cfg)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EuclideanExperimentConfig {
    /// Horizon in 4-D time; the waveguide runs to `T0·N^{-2}`.
    pub t0: f64,
    /// 4-D time step; the waveguide step is `dt·N^{-2}`.
    pub dt: f64,
    /// Cutoff radius applied to the 4-D solution.
    pub r: f64,
    #[serde(default = "yes")]
    pub nonlinear: bool,
    #[serde(default = "default_ceiling")]
    pub max_steps: usize,
}

/// One leg at scale `N`; `phi` is the 4-D profile.
pub fn euclidean_leg(
    waveguide: &GridSpec,
    n: f64,
    phi: &(impl Fn([f64; 4]) -> C64 + Sync),
    cfg: &EuclideanExperimentConfig,
) -> Result<ExperimentRow> {
    let start = Instant::now();
    if waveguide.nx > MAX_EUCLIDEAN_POINTS_PER_AXIS || waveguide.my > MAX_EUCLIDEAN_POINTS_PER_AXIS {
        return Err(Error::ResourceGuard(format!(
            "4-D grids are capped at {MAX_EUCLIDEAN_POINTS_PER_AXIS} points per axis, got nx = {}, my = {}",
            waveguide.nx, waveguide.my
        )));
    }
    if !(cfg.r > 0.0) {
        return Err(Error::arg(format!("cutoff radius must be > 0, got {}", cfg.r)));
    }
    let spec = EuclideanProfileSpec::from_generator(waveguide, n, phi)?;
    let f0 = euclidean_profile(&spec)?;
    let steps = step_count(cfg.t0, cfg.dt)?;
    guard(steps, cfg.max_steps, "the Euclidean leg")?;
    let wdt = cfg.dt / (n * n);
    let target = f0.spec().clone().with_dt(wdt)?;
    let f0 = f0.relabel(&target)?;
    let egrid = spec.phi.spec().clone().with_dt(cfg.dt)?;
    let phi0 = spec.phi.relabel(&egrid)?;

    let mut wcfg = NlsStepperConfig::new(wdt)?;
    let mut ecfg = NlsStepperConfig::new(cfg.dt)?;
    wcfg.nonlinear = cfg.nonlinear;
    ecfg.nonlinear = cfg.nonlinear;
    let mut ws = NlsStepper::new(&target, &wcfg)?;
    let mut es = NlsStepper::new(&egrid, &ecfg)?;

    let r = cfg.r;
    let transplant = |v: &WaveguideField| -> Result<WaveguideField> {
        v.map_physical(|p, z| z * (n * eta((p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]).sqrt() / r))).relabel(&target)
    };

    let (mut u, mut v) = (f0, phi0);
    let u0 = h1(&u);
    let (mut sup_err, mut sup_u) = (0.0f64, u0);
    for k in 0..=steps {
        if k > 0 {
            u = ws.step(&u)?;
            v = es.step(&v)?;
        }
        sup_err = sup_err.max(h1_distance(&u, &transplant(&v)?)?);
        sup_u = sup_u.max(h1(&u));
    }
    Ok(ExperimentRow {
        scale: n,
        time_horizon: cfg.t0 / (n * n),
        sup_h1_error: sup_err,
        rel_error: if sup_u > 0.0 { sup_err / sup_u } else { 0.0 },
        residual_proxy: None,
        wall_seconds: elapsed(start),
        h1_growth: if u0 > 0.0 { sup_u / u0 } else { 1.0 },
    })
}

/// Runs every `N` in `ns` and returns rows in input order.
pub fn euclidean_approximation_experiment(
    waveguide: &GridSpec,
    ns: &[f64],
    phi: impl Fn([f64; 4]) -> C64 + Sync,
    cfg: &EuclideanExperimentConfig,
) -> Result<Vec<ExperimentRow>> {
    if ns.is_empty() {
        return Err(Error::arg("no N values given"));
    }
    // legs are run one after another: each already holds two 4-D fields
    ns.iter().map(|&n| euclidean_leg(waveguide, n, &phi, cfg)).collect()
}
