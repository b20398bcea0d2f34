//! The scenario bodies. Each one returns its tables and assertions; the
//! caller owns all file output.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::*;
use super::manifest::Assertion;
use crate::diagnostics::conserved::conserved_set;
use crate::diagnostics::virial::{momentum_identity_residual, virial_action, virial_bound, VirialConfig};
use crate::diagnostics::{scattering_extract, strichartz_quotient, StrichartzProbeConfig};
use crate::error::{Error, Result};
use crate::evolution::nls::step_count;
use crate::evolution::symmetry::{galilean_boost, rescale_solution, round_to_dual_lattice};
use crate::evolution::{evolve_nls, EvolveOptions, NlsStepperConfig, ResonantStepper, ResonantStepperConfig};
use crate::field::norms::{grad_sq, h1, h1_distance, mass, w_components, w_from_components, z_density, z_from_density};
use crate::field::{Dealias, Grid2, GridSpec, ResonantNormKind, ResonantState, Trajectory, WaveguideField};
use crate::lattice::{enumerate_resonant_triples, enumerate_resonant_triples_fast, weight_sum, LatticePoint, ResonanceTable};
use crate::profiles::{euclidean_approximation_experiment, ls_approximation_experiment, EuclideanExperimentConfig, LsExperimentConfig};

/// A CSV file: header row plus data rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub file: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(file: &str, header: &[&'static str]) -> Self {
        Table { file: file.to_string(), header: header.to_vec(), rows: Vec::new() }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub assertions: Vec<Assertion>,
    pub extras: BTreeMap<String, serde_json::Value>,
}

/// Float cell: shortest round-trip scientific form.
pub fn cell(v: f64) -> String {
    format!("{v:e}")
}

fn guard(steps: usize, ceiling: usize, what: &str) -> Result<()> {
    if steps > ceiling {
        return Err(Error::ResourceGuard(format!("{what} needs {steps} steps, above the ceiling of {ceiling}")));
    }
    Ok(())
}

fn grid_of(cfg: &ExperimentConfig) -> Result<&GridSpec> {
    cfg.grid.as_ref().ok_or_else(|| Error::arg("scenario needs a grid"))
}

pub fn run_scenario(cfg: &ExperimentConfig) -> Result<Outcome> {
    match &cfg.params {
        ScenarioParams::Conservation(p) => conservation(grid_of(cfg)?, p),
        ScenarioParams::SmallDataScattering(p) => small_data_scattering(grid_of(cfg)?, p),
        ScenarioParams::ResonantSmalldata(p) => resonant_smalldata(p),
        ScenarioParams::LsApprox(p) => ls_approx(grid_of(cfg)?, p),
        ScenarioParams::EuclideanApprox(p) => euclidean_approx(grid_of(cfg)?, p),
        ScenarioParams::ResonanceCombinatorics(p) => resonance_combinatorics(p),
        ScenarioParams::StrichartzProbe(p) => strichartz_probe(grid_of(cfg)?, p, cfg.seed),
        ScenarioParams::MorawetzCheck(p) => morawetz_check(grid_of(cfg)?, p),
    }
}

/// The packet described by `d`, scaled to `H¹` norm `d.h1_norm`.
pub fn packet(spec: &GridSpec, d: &PacketParams) -> WaveguideField {
    let xi = round_to_dual_lattice(spec, d.frequency);
    let ky = TAU / spec.torus_period;
    let s2 = 2.0 * d.sigma * d.sigma;
    let (w, c) = (d.mode_weight, d.center);
    let f = WaveguideField::from_fn(spec, |p| {
        let (dx, dy) = (p[0] - c[0], p[1] - c[1]);
        let g = (-(dx * dx + dy * dy) / s2).exp();
        C64::from_polar(g, xi[0] * p[0] + xi[1] * p[1]) * (1.0 + w * C64::from_polar(1.0, ky * p[2]))
    });
    let n = h1(&f);
    if d.h1_norm == 0.0 || n == 0.0 {
        return WaveguideField::zeros(spec);
    }
    f.scale_real(d.h1_norm / n)
}

fn gaussian(x: [f64; 2], sigma: f64) -> f64 {
    (-(x[0] * x[0] + x[1] * x[1]) / (2.0 * sigma * sigma)).exp()
}

/// `a` strictly below `b`, element by element along the sequence.
fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn conservation_run(u0: &WaveguideField, t_final: f64, cfg: &NlsStepperConfig, table: &mut Table) -> Result<[f64; 3]> {
    let ev = evolve_nls(u0, t_final, cfg, &EvolveOptions::default(), None)?;
    let c0 = conserved_set(u0);
    let mut drift = [0.0f64; 3];
    let dt = cell(cfg.dt);
    table.rows.push(vec![dt.clone(), "0".into(), cell(0.0), cell(c0.mass), cell(c0.energy), cell(c0.momentum[0]), cell(c0.momentum[1])]);
    for r in &ev.records {
        let dm = if c0.mass > 0.0 { (r.mass - c0.mass).abs() / c0.mass } else { r.mass };
        let dp = (r.momentum_x1 - c0.momentum[0]).abs().max((r.momentum_x2 - c0.momentum[1]).abs());
        let de = (r.energy - c0.energy).abs();
        drift = [drift[0].max(dm), drift[1].max(dp), drift[2].max(de)];
        table.rows.push(vec![dt.clone(), r.step.to_string(), cell(r.time), cell(r.mass), cell(r.energy), cell(r.momentum_x1), cell(r.momentum_x2)]);
    }
    Ok(drift)
}

fn conservation(grid: &GridSpec, p: &ConservationParams) -> Result<Outcome> {
    let steps = step_count(p.t_final, grid.dt)?;
    guard(3 * steps, p.max_steps, "the conservation runs at dt and dt/2")?;
    let u0 = packet(grid, &p.data);
    let mut out = Outcome::default();
    let mut table = Table::new("conservation.csv", &["dt", "step", "time", "mass", "energy", "momentum_x1", "momentum_x2"]);
    let cfg = NlsStepperConfig::new(grid.dt)?.with_dealias(p.dealias);
    let coarse = conservation_run(&u0, p.t_final, &cfg, &mut table)?;
    let fine = conservation_run(&u0, p.t_final, &NlsStepperConfig { dt: grid.dt / 2.0, ..cfg.clone() }, &mut table)?;
    out.tables.push(table);

    let worst_mass = coarse[0].max(fine[0]);
    out.assertions.push(Assertion::at_most("mass_drift", worst_mass, p.mass_tolerance));
    let worst_mom = coarse[1].max(fine[1]);
    out.assertions.push(Assertion::at_most("momentum_drift", worst_mom, p.momentum_tolerance));
    if coarse[2] == 0.0 && fine[2] == 0.0 {
        out.assertions.push(Assertion::trivial("energy_drift_ratio", "no energy drift at either step"));
    } else {
        let ratio = coarse[2] / fine[2];
        out.assertions.push(Assertion::within("energy_drift_ratio", ratio, p.energy_ratio_range));
    }
    out.extras.insert("energy_drift_dt".into(), coarse[2].into());
    out.extras.insert("energy_drift_half_dt".into(), fine[2].into());

    if let Some(s) = &p.symmetry {
        symmetry_checks(&u0, s, p.max_steps, &mut out)?;
    }
    Ok(out)
}

/// Galilean covariance against a fine reference, and exact rescaling.
///
/// The runs here skip de-aliasing: the mask sits at fixed frequencies, so
/// it does not commute with a boost and its per-step loss would swamp the
/// time-step error being measured.
fn symmetry_checks(u0: &WaveguideField, s: &SymmetryParams, ceiling: usize, out: &mut Outcome) -> Result<()> {
    let spec = u0.spec();
    let xi = round_to_dual_lattice(spec, s.boost);
    let steps = step_count(s.t_final, s.dt)?;
    guard(19 * steps, ceiling, "the Galilean runs")?;
    let opts = EvolveOptions { record_diagnostics: false, ..Default::default() };
    let run = |f: &WaveguideField, dt: f64| -> Result<WaveguideField> {
        let cfg = NlsStepperConfig::new(dt)?.with_dealias(Dealias::Off);
        Ok(evolve_nls(f, s.t_final, &cfg, &opts, None)?.final_state)
    };
    let reference = galilean_boost(&run(u0, s.dt / 16.0)?, xi, s.t_final)?;
    let boosted = galilean_boost(u0, xi, 0.0)?;
    let mut table = Table::new("galilean.csv", &["dt", "deviation"]);
    let mut devs = Vec::new();
    for dt in [s.dt, s.dt / 2.0] {
        let d = h1_distance(&run(&boosted, dt)?, &reference)?;
        table.rows.push(vec![cell(dt), cell(d)]);
        devs.push(d);
    }
    out.tables.push(table);
    if devs[0] == 0.0 && devs[1] == 0.0 {
        out.assertions.push(Assertion::trivial("galilean_deviation_ratio", "no deviation at either step"));
    } else {
        out.assertions.push(Assertion::within("galilean_deviation_ratio", devs[0] / devs[1], s.ratio_range));
    }

    let r = rescale_solution(u0, s.lambda)?;
    let (g0, m0) = (grad_sq(u0), mass(u0));
    let grad_err = if g0 > 0.0 { (grad_sq(&r) - g0).abs() / g0 } else { grad_sq(&r) };
    let want = m0 / (s.lambda * s.lambda);
    let mass_err = if want > 0.0 { (mass(&r) - want).abs() / want } else { mass(&r) };
    out.assertions.push(Assertion::at_most("rescale_gradient", grad_err, s.rescale_tolerance));
    out.assertions.push(Assertion::at_most("rescale_mass", mass_err, s.rescale_tolerance));
    Ok(())
}

/// Times `t` on the sampling lattice `k·every`, as integer step indices.
fn sample_index(t: f64, dt: f64) -> Result<usize> {
    let k = (t / dt).round();
    if !(t > 0.0) || (k * dt - t).abs() > 1e-9 * t.max(1.0) {
        return Err(Error::arg(format!("time {t} is not a positive multiple of dt = {dt}")));
    }
    Ok(k as usize)
}

fn stride_of(every: f64, dt: f64) -> Result<usize> {
    sample_index(every, dt)
}

fn small_data_scattering(grid: &GridSpec, p: &ScatteringParams) -> Result<Outcome> {
    let dt = grid.dt;
    let stride = stride_of(p.sample_every, dt)?;
    let mut keep = BTreeSet::new();
    for &t in &p.gap_times {
        keep.insert(sample_index(t, dt)?);
        keep.insert(sample_index(2.0 * t, dt)?);
    }
    for &t in &p.z_horizons {
        sample_index(t, dt)?;
        sample_index(t / 2.0, dt)?;
    }
    let last_gap = keep.iter().max().copied().unwrap_or(0);
    let last_z = p.z_horizons.iter().map(|t| sample_index(*t, dt).unwrap_or(0)).max().unwrap_or(0);
    let steps = last_gap.max(last_z);
    guard(steps, p.max_steps, "the scattering run")?;

    let u0 = packet(grid, &p.data);
    let cfg = NlsStepperConfig::new(dt)?.with_dealias(p.dealias);
    let mut traj = Trajectory::new();
    let (mut times, mut dens) = (vec![0.0], vec![z_density(&u0)]);
    let mut obs = |k: usize, t: f64, u: &WaveguideField| {
        if keep.contains(&k) {
            traj.push(t, u.clone());
        }
        if k.is_multiple_of(stride) {
            times.push(t);
            dens.push(z_density(u));
        }
    };
    let opts = EvolveOptions { stride: 1, keep_trajectory: false, record_diagnostics: false };
    evolve_nls(&u0, steps as f64 * dt, &cfg, &opts, Some(&mut obs))?;

    let mut out = Outcome::default();
    let mut gaps = Table::new("scattering_gap.csv", &["t", "gap"]);
    let mut gv = Vec::new();
    for &t in &p.gap_times {
        let (_, g) = scattering_extract(&traj, t, 2.0 * t)?;
        gaps.rows.push(vec![cell(t), cell(g)]);
        gv.push(g);
    }
    let mut zt = Table::new("z_partial.csv", &["horizon", "z_partial"]);
    let mut zv = Vec::new();
    for &t in &p.z_horizons {
        let z = z_from_density(&times, &dens, (t / 2.0, t));
        zt.rows.push(vec![cell(t), cell(z)]);
        zv.push(z);
    }
    out.tables.extend([gaps, zt]);
    out.assertions.push(Assertion::check("gap_decreasing", strictly_decreasing(&gv), "strictly decreasing in t"));
    out.assertions.push(Assertion::check("z_partial_decreasing", strictly_decreasing(&zv), "strictly decreasing in T"));
    Ok(out)
}

fn resonant_smalldata(p: &ResonantSmallDataParams) -> Result<Outcome> {
    let dt = p.dt;
    let stride = stride_of(p.sample_every, dt)?;
    let mut keep = BTreeSet::new();
    for &t in &p.gap_times {
        keep.insert(sample_index(t, dt)?);
        keep.insert(sample_index(2.0 * t, dt)?);
    }
    for &t in &p.w_horizons {
        sample_index(t, dt)?;
        sample_index(t / 2.0, dt)?;
    }
    let last_w = p.w_horizons.iter().map(|t| sample_index(*t, dt).unwrap_or(0)).max().unwrap_or(0);
    let steps = keep.iter().max().copied().unwrap_or(0).max(last_w);
    guard(steps, p.max_steps, "the resonant run")?;

    let grid = Grid2::new(p.box_side, p.nx)?;
    let sigma = p.sigma;
    let v0 = ResonantState::from_fn(p.trunc, grid, |q, x| {
        let g = gaussian(x, sigma);
        match (q.a, q.b) {
            (0, 0) => C64::new(g, 0.0),
            (1, 0) => C64::new(0.5 * g, 0.0),
            _ => C64::new(0.0, 0.0),
        }
    })?;
    let v0 = v0.scale(C64::new((p.e_ls / v0.e_ls()).sqrt(), 0.0));
    let table = Arc::new(ResonanceTable::build(p.trunc)?);
    let cfg = ResonantStepperConfig::new(dt, table)?;
    let mut st = ResonantStepper::new(&v0, &cfg)?;
    let weights: Vec<f64> = v0.points().map(LatticePoint::bracket_sq).collect();
    let mut traj = Trajectory::new();
    let (mut times, mut vals) = (vec![0.0], vec![w_components(&v0)]);
    let mut v = v0;
    for k in 1..=steps {
        v = st.step(&v)?;
        let t = k as f64 * dt;
        if keep.contains(&k) {
            traj.push(t, v.clone());
        }
        if k.is_multiple_of(stride) {
            times.push(t);
            vals.push(w_components(&v));
        }
    }

    let mut out = Outcome::default();
    let mut gaps = Table::new("resonant_gap.csv", &["t", "gap"]);
    let mut gv = Vec::new();
    for &t in &p.gap_times {
        let a = traj.at(t)?.linear_flow(-t);
        let b = traj.at(2.0 * t)?.linear_flow(-2.0 * t);
        let g = a.sub(&b)?.norm(ResonantNormKind::H1L2);
        gaps.rows.push(vec![cell(t), cell(g)]);
        gv.push(g);
    }
    let mut wt = Table::new("w_partial.csv", &["horizon", "w_partial"]);
    let mut wv = Vec::new();
    for &t in &p.w_horizons {
        let w = w_from_components(&weights, &times, &vals, (t / 2.0, t));
        wt.rows.push(vec![cell(t), cell(w)]);
        wv.push(w);
    }
    out.tables.extend([gaps, wt]);
    out.assertions.push(Assertion::check("resonant_gap_decreasing", strictly_decreasing(&gv), "strictly decreasing in t"));
    out.assertions.push(Assertion::check("w_partial_decreasing", strictly_decreasing(&wv), "strictly decreasing in T"));
    Ok(out)
}

fn ls_approx(grid: &GridSpec, p: &LsApproxParams) -> Result<Outcome> {
    let ky = TAU / grid.torus_period;
    let (a0, a1, sigma) = (p.amplitudes[0], p.amplitudes[1], p.sigma);
    let psi = WaveguideField::from_fn(grid, |z| {
        let g = gaussian([z[0], z[1]], sigma);
        C64::new(a0 * g, 0.0) + C64::from_polar(a1 * g, ky * z[2])
    });
    let cfg = LsExperimentConfig { t0: p.t0, dt: grid.dt, trunc: p.trunc, nonlinear: p.nonlinear, max_steps: p.max_steps };
    let mut ms = p.ms.clone();
    ms.sort_by(|a, b| b.total_cmp(a));
    let rows = ls_approximation_experiment(&psi, &ms, &cfg)?;

    let mut out = Outcome::default();
    let mut t = Table::new("ls_approx.csv", &["m", "time_horizon", "sup_h1_error", "rel_error", "residual_proxy", "wall_seconds"]);
    for r in &rows {
        t.rows.push(vec![
            cell(r.scale),
            cell(r.time_horizon),
            cell(r.sup_h1_error),
            cell(r.rel_error),
            r.residual_proxy.map(cell).unwrap_or_default(),
            cell(r.wall_seconds),
        ]);
    }
    out.tables.push(t);
    let errs: Vec<f64> = rows.iter().map(|r| r.rel_error).collect();
    out.assertions.push(Assertion::check("error_decreasing_in_m", strictly_decreasing(&errs), "relative error strictly smaller at every smaller M"));
    if p.nonlinear {
        for w in rows.windows(2) {
            if let (Some(a), Some(b)) = (w[0].residual_proxy, w[1].residual_proxy) {
                if (w[0].scale / w[1].scale - 2.0).abs() < 1e-12 {
                    let name = format!("residual_ratio_m{}", w[1].scale);
                    out.assertions.push(Assertion::within(&name, a / b, p.residual_ratio_range));
                }
            }
        }
    }
    Ok(out)
}

fn euclidean_approx(grid: &GridSpec, p: &EuclideanApproxParams) -> Result<Outcome> {
    let (amp, sigma) = (p.amplitude, p.sigma);
    let s2 = 2.0 * sigma * sigma;
    let phi = move |z: [f64; 4]| C64::new(amp * (-(z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3]) / s2).exp(), 0.0);
    let cfg = EuclideanExperimentConfig { t0: p.t0, dt: p.dt, r: p.r, nonlinear: p.nonlinear, max_steps: p.max_steps };
    let mut ns = p.ns.clone();
    ns.sort_by(f64::total_cmp);
    let rows = euclidean_approximation_experiment(grid, &ns, phi, &cfg)?;

    let mut out = Outcome::default();
    let mut t = Table::new("euclidean_approx.csv", &["n", "time_horizon", "sup_h1_error", "rel_error", "h1_growth", "wall_seconds"]);
    for r in &rows {
        t.rows.push(vec![cell(r.scale), cell(r.time_horizon), cell(r.sup_h1_error), cell(r.rel_error), cell(r.h1_growth), cell(r.wall_seconds)]);
    }
    out.tables.push(t);
    let errs: Vec<f64> = rows.iter().map(|r| r.sup_h1_error).collect();
    out.assertions.push(Assertion::check("error_decreasing_in_n", strictly_decreasing(&errs), "error strictly smaller at every larger N"));
    let growth = rows.iter().map(|r| r.h1_growth).fold(0.0, f64::max);
    out.assertions.push(Assertion::at_most("h1_growth", growth, p.max_h1_growth));
    Ok(out)
}

fn resonance_combinatorics(p: &CombinatoricsParams) -> Result<Outcome> {
    let js: Vec<LatticePoint> = crate::lattice::ball(p.jmax).collect();
    let oracle: Vec<(LatticePoint, usize, usize, bool)> = js
        .par_iter()
        .map(|&j| -> Result<_> {
            let a: BTreeSet<_> = enumerate_resonant_triples(j, p.trunc)?.into_iter().collect();
            let b: BTreeSet<_> = enumerate_resonant_triples_fast(j, p.trunc)?.into_iter().collect();
            Ok((j, a.len(), b.len(), a == b))
        })
        .collect::<Result<_>>()?;
    let mut ot = Table::new("resonance_oracle.csv", &["j_a", "j_b", "brute_count", "fast_count", "equal"]);
    for (j, a, b, eq) in &oracle {
        ot.rows.push(vec![j.a.to_string(), j.b.to_string(), a.to_string(), b.to_string(), eq.to_string()]);
    }
    let bad = oracle.iter().filter(|o| !o.3).count();

    let mut truncs = p.weight_truncs.clone();
    truncs.sort_unstable();
    truncs.dedup();
    let wj: Vec<LatticePoint> = crate::lattice::ball(p.weight_jmax).collect();
    let sums: Vec<Vec<f64>> =
        wj.par_iter().map(|&j| truncs.iter().map(|&t| weight_sum(j, t)).collect::<Result<Vec<f64>>>()).collect::<Result<_>>()?;
    let mut wt = Table::new("weight_sum.csv", &["j_a", "j_b", "trunc", "weight_sum"]);
    let (mut monotone, mut tails) = (true, true);
    for (j, s) in wj.iter().zip(&sums) {
        for (t, v) in truncs.iter().zip(s) {
            wt.rows.push(vec![j.a.to_string(), j.b.to_string(), t.to_string(), cell(*v)]);
        }
        monotone &= s.windows(2).all(|w| w[1] >= w[0]);
        let inc: Vec<f64> = s.windows(2).map(|w| w[1] - w[0]).collect();
        tails &= strictly_decreasing(&inc);
    }

    let mut out = Outcome::default();
    out.tables.extend([ot, wt]);
    out.assertions.push(Assertion::at_most("oracle_discrepancies", bad as f64, 0.0));
    out.assertions.push(Assertion::check("weight_sum_monotone", monotone, "non-decreasing in trunc for every j"));
    if truncs.len() >= 3 {
        out.assertions.push(Assertion::check("tail_increments_shrink", tails, "successive increments strictly smaller for every j"));
    }
    Ok(out)
}

fn strichartz_probe(grid: &GridSpec, p: &StrichartzParams, seed: u64) -> Result<Outcome> {
    let band = 2.0 * p.ns.iter().chain(&p.calibration_ns).copied().max().unwrap_or(1) as f64;
    let data: Vec<(u64, WaveguideField)> = (0..p.sample_count as u64)
        .map(|s| {
            let sd = seed.wrapping_add(s);
            let mut rng = ChaCha8Rng::seed_from_u64(sd);
            (sd, WaveguideField::random_band_limited(grid, &mut rng, band, p.decay))
        })
        .collect();
    let levels: BTreeSet<u64> = p.ns.iter().chain(&p.calibration_ns).copied().collect();
    let jobs: Vec<(u64, usize)> = levels.iter().flat_map(|&n| (0..data.len()).map(move |i| (n, i))).collect();
    let quotients: Vec<f64> = jobs
        .par_iter()
        .map(|&(n, i)| {
            let mut c = StrichartzProbeConfig::new(p.p, n)?;
            c.sample_count = p.sample_count;
            c.windows = p.windows;
            c.nodes_per_window = p.nodes_per_window;
            strichartz_quotient(&data[i].1, &c)
        })
        .collect::<Result<_>>()?;

    let mut t = Table::new("strichartz.csv", &["n", "seed", "quotient"]);
    let (mut cal, mut worst) = (0.0f64, 0.0f64);
    for (&(n, i), q) in jobs.iter().zip(&quotients) {
        t.rows.push(vec![n.to_string(), data[i].0.to_string(), cell(*q)]);
        if p.calibration_ns.contains(&n) {
            cal = cal.max(*q);
        }
        if p.ns.contains(&n) {
            worst = worst.max(*q);
        }
    }
    let mut out = Outcome::default();
    out.tables.push(t);
    out.extras.insert("calibration".into(), cal.into());
    out.assertions.push(Assertion::at_most("quotient_bounded", worst, p.bound_factor * cal));
    Ok(out)
}

fn morawetz_check(grid: &GridSpec, p: &MorawetzParams) -> Result<Outcome> {
    let u0 = packet(grid, &p.data);
    let dt = grid.dt;
    let steps = step_count(p.t_final, dt)?;
    let k_res = sample_index(p.residual_time, dt / 2.0)?;
    guard(steps + 2 * k_res, p.max_steps, "the Morawetz runs")?;
    let vcfg = VirialConfig::centered(p.radius)?;
    vcfg.check_fits(grid.box_side)?;
    let cfg = NlsStepperConfig::new(dt)?.with_dealias(p.dealias);

    let mut vt = Table::new("virial.csv", &["time", "virial_action", "virial_bound"]);
    let mut worst = 0.0f64;
    let mut err = None;
    let mut record = |t: f64, u: &WaveguideField| match virial_action(u, &vcfg, t) {
        Ok(a) => {
            let b = virial_bound(u, p.radius);
            let ratio = if b > 0.0 {
                a.abs() / b
            } else if a == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            worst = worst.max(ratio);
            vt.rows.push(vec![cell(t), cell(a), cell(b)]);
        }
        Err(e) => err = Some(e),
    };
    record(0.0, &u0);
    let mut obs = |_k: usize, t: f64, u: &WaveguideField| record(t, u);
    let opts = EvolveOptions { stride: 1, keep_trajectory: false, record_diagnostics: false };
    evolve_nls(&u0, p.t_final, &cfg, &opts, Some(&mut obs))?;
    if let Some(e) = err {
        return Err(e);
    }

    let mut rt = Table::new("momentum_identity.csv", &["dt", "time", "residual"]);
    let mut res = Vec::new();
    for h in [dt, dt / 2.0] {
        let k = sample_index(p.residual_time, h)?;
        let c = NlsStepperConfig { dt: h, ..cfg.clone() };
        let opts = EvolveOptions { keep_trajectory: true, record_diagnostics: false, ..Default::default() };
        let tr = evolve_nls(&u0, (k + 1) as f64 * h, &c, &opts, None)?.trajectory;
        let r = momentum_identity_residual(&tr, k, h)?;
        rt.rows.push(vec![cell(h), cell(p.residual_time), cell(r)]);
        res.push(r);
    }

    let mut out = Outcome::default();
    out.tables.extend([vt, rt]);
    out.assertions.push(Assertion::at_most("virial_bound_ratio", worst, 1.0));
    if res[0] == 0.0 && res[1] == 0.0 {
        out.assertions.push(Assertion::trivial("identity_residual_ratio", "zero residual at both steps"));
    } else {
        out.assertions.push(Assertion::at_least("identity_residual_ratio", res[0] / res[1], p.residual_ratio_min));
    }
    Ok(out)
}
