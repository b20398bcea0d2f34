//! The truncated cubic resonant system
//! `(i∂_t + Δ_x) u_j = Σ_{R(j)} u_{j1} ū_{j2} u_{j3}`,
//! integrated by classical RK4 in the interaction picture so that the
//! stiff linear part `e^{itΔ_x}` is exact.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::norms::Trajectory;
use crate::field::{plane, Grid2, ResonantState};
use crate::lattice::ResonanceTable;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResonantScheme {
    #[default]
    InteractionPictureRk4,
}

#[derive(Clone, Debug)]
pub struct ResonantStepperConfig {
    pub dt: f64,
    pub scheme: ResonantScheme,
    pub table: Arc<ResonanceTable>,
    /// 2/3-rule mask after every right-hand side evaluation.
    pub dealias: bool,
    pub nonlinear: bool,
}

impl ResonantStepperConfig {
    pub fn new(dt: f64, table: Arc<ResonanceTable>) -> Result<Self> {
        let c = ResonantStepperConfig { dt, scheme: ResonantScheme::InteractionPictureRk4, table, dealias: true, nonlinear: true };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::arg(format!("dt must be > 0, got {}", self.dt)));
        }
        Ok(())
    }
}

fn check_table(v: &ResonantState, table: &ResonanceTable) -> Result<()> {
    if table.trunc() < v.trunc() {
        return Err(Error::Truncation(format!("table trunc {} is below state trunc {}", table.trunc(), v.trunc())));
    }
    Ok(())
}

/// Component `j` of the result is `Σ_{R(j)} u_{j1} ū_{j2} u_{j3}`, pointwise.
pub fn resonant_rhs(v: &ResonantState, table: &ResonanceTable) -> Result<ResonantState> {
    check_table(v, table)?;
    let nonzero: Vec<bool> = v.components().iter().map(|c| c.iter().any(|z| z.re != 0.0 || z.im != 0.0)).collect();
    let live = |p| v.index(p).filter(|&i| nonzero[i]);
    let points: Vec<_> = v.points().collect();
    let mut out = ResonantState::zeros(v.trunc(), *v.grid())?;
    let comps = v.components();
    out.components_mut().par_iter_mut().zip(points.par_iter()).for_each(|(acc, &j)| {
        for t in table.triples(j) {
            let (Some(a), Some(b), Some(c)) = (live(t.j1), live(t.j2), live(t.j3)) else {
                continue;
            };
            let (a, b, c) = (&comps[a], &comps[b], &comps[c]);
            for (i, o) in acc.iter_mut().enumerate() {
                *o += a[i] * b[i].conj() * c[i];
            }
        }
    });
    Ok(out)
}

type Comps = Vec<Vec<C64>>;

fn lin(a: &Comps, c: f64, b: &Comps) -> Comps {
    a.par_iter().zip(b.par_iter()).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + c * q).collect()).collect()
}

#[derive(Clone, Debug)]
pub struct ResonantStepper {
    grid: Grid2,
    trunc: i64,
    dt: f64,
    table: Arc<ResonanceTable>,
    nonlinear: bool,
    half: Vec<C64>,
    mask: Vec<f64>,
    steps_taken: usize,
}

impl ResonantStepper {
    pub fn new(v: &ResonantState, cfg: &ResonantStepperConfig) -> Result<Self> {
        cfg.validate()?;
        check_table(v, &cfg.table)?;
        let g = *v.grid();
        let mut half = vec![C64::new(1.0, 0.0); g.len()];
        let dt = cfg.dt;
        plane::apply_symbol(&mut half, &g, |a, b| C64::from_polar(1.0, -0.5 * dt * (a * a + b * b)));
        let mut m = vec![C64::new(1.0, 0.0); g.len()];
        if cfg.dealias {
            let top = g.nx as f64 / 3.0 + 1e-9;
            let unit = std::f64::consts::TAU / g.box_side;
            plane::apply_symbol(&mut m, &g, |a, b| {
                let keep = (a / unit).abs() <= top && (b / unit).abs() <= top;
                C64::new(if keep { 1.0 } else { 0.0 }, 0.0)
            });
        }
        Ok(ResonantStepper {
            grid: g,
            trunc: v.trunc(),
            dt,
            table: cfg.table.clone(),
            nonlinear: cfg.nonlinear,
            half,
            mask: m.iter().map(|z| z.re).collect(),
            steps_taken: 0,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn half_flow(&self, x: &mut Comps) {
        x.par_iter_mut().for_each(|c| c.iter_mut().zip(&self.half).for_each(|(v, m)| *v *= m));
    }

    // F(v) = -i N(v), spectral in and out
    fn rhs_spectral(&self, x: &Comps) -> Result<Comps> {
        if !self.nonlinear {
            return Ok(vec![vec![C64::new(0.0, 0.0); self.grid.len()]; x.len()]);
        }
        let mut phys = x.clone();
        phys.par_iter_mut().for_each(|c| plane::backward(c, &self.grid));
        let mut st = ResonantState::zeros(self.trunc, self.grid)?;
        st.components_mut().iter_mut().zip(phys).for_each(|(d, s)| *d = s);
        let n = resonant_rhs(&st, &self.table)?;
        let mut out: Comps = n.components().to_vec();
        let minus_i = C64::new(0.0, -1.0);
        out.par_iter_mut().for_each(|c| {
            plane::forward(c, &self.grid);
            c.iter_mut().zip(&self.mask).for_each(|(v, m)| *v *= minus_i * m);
        });
        Ok(out)
    }

    pub fn step(&mut self, v: &ResonantState) -> Result<ResonantState> {
        if v.trunc() != self.trunc || *v.grid() != self.grid {
            return Err(Error::Truncation("stepper built for another state shape".into()));
        }
        let dt = self.dt;
        let mut x: Comps = v.components().to_vec();
        x.par_iter_mut().for_each(|c| plane::forward(c, &self.grid));

        let mut xi = x.clone();
        self.half_flow(&mut xi);
        let mut k1 = self.rhs_spectral(&x)?;
        self.half_flow(&mut k1);
        let k2 = self.rhs_spectral(&lin(&xi, dt / 2.0, &k1))?;
        let k3 = self.rhs_spectral(&lin(&xi, dt / 2.0, &k2))?;
        let mut x4 = lin(&xi, dt, &k3);
        self.half_flow(&mut x4);
        let k4 = self.rhs_spectral(&x4)?;

        let mut acc = lin(&lin(&xi, dt / 6.0, &k1), dt / 3.0, &k2);
        acc = lin(&acc, dt / 3.0, &k3);
        self.half_flow(&mut acc);
        let mut next = lin(&acc, dt / 6.0, &k4);
        next.par_iter_mut().for_each(|c| plane::backward(c, &self.grid));

        self.steps_taken += 1;
        let mut out = ResonantState::zeros(self.trunc, self.grid)?;
        out.components_mut().iter_mut().zip(next).for_each(|(d, s)| *d = s);
        if !out.is_finite() {
            return Err(Error::NonFinite { context: "resonant step", step: self.steps_taken });
        }
        Ok(out)
    }
}

pub fn step_resonant(v: &ResonantState, cfg: &ResonantStepperConfig) -> Result<ResonantState> {
    ResonantStepper::new(v, cfg)?.step(v)
}

#[derive(Clone, Debug)]
pub struct ResonantEvolution {
    pub final_state: ResonantState,
    /// Includes the initial state.
    pub trajectory: Trajectory<ResonantState>,
}

/// Fixed-step evolution, sampling every `stride` steps (and the last one).
pub fn evolve_resonant(
    v0: &ResonantState,
    t_final: f64,
    cfg: &ResonantStepperConfig,
    stride: usize,
    keep_trajectory: bool,
) -> Result<ResonantEvolution> {
    let n = super::nls::step_count(t_final, cfg.dt)?;
    let stride = stride.max(1);
    let mut st = ResonantStepper::new(v0, cfg)?;
    let mut v = v0.clone();
    let mut traj = Trajectory::new();
    if keep_trajectory {
        traj.push(0.0, v.clone());
    }
    for k in 1..=n {
        v = st.step(&v)?;
        if keep_trajectory && (k % stride == 0 || k == n) {
            traj.push(k as f64 * cfg.dt, v.clone());
        }
    }
    Ok(ResonantEvolution { final_state: v, trajectory: traj })
}

/// One interaction-picture RK4 step of the scalar 2-D cubic NLS
/// `(i∂_t + Δ)u = |u|²u`, written out on a single array.
pub fn scalar_nls2d_step(u: &[C64], g: &Grid2, dt: f64, dealias: bool) -> Vec<C64> {
    let e_half = |w: &mut Vec<C64>| plane::apply_symbol(w, g, |a, b| C64::from_polar(1.0, -0.5 * dt * (a * a + b * b)));
    let unit = std::f64::consts::TAU / g.box_side;
    let top = g.nx as f64 / 3.0 + 1e-9;
    let f = |w: &Vec<C64>| -> Vec<C64> {
        let mut p = w.clone();
        plane::backward(&mut p, g);
        for z in p.iter_mut() {
            *z *= C64::new(0.0, -z.norm_sqr());
        }
        plane::forward(&mut p, g);
        if dealias {
            plane::apply_symbol(&mut p, g, |a, b| C64::new(if (a / unit).abs() <= top && (b / unit).abs() <= top { 1.0 } else { 0.0 }, 0.0));
        }
        p
    };
    let add = |a: &Vec<C64>, c: f64, b: &Vec<C64>| -> Vec<C64> { a.iter().zip(b).map(|(x, y)| x + c * y).collect() };

    let mut w = u.to_vec();
    plane::forward(&mut w, g);
    let mut wi = w.clone();
    e_half(&mut wi);
    let mut k1 = f(&w);
    e_half(&mut k1);
    let k2 = f(&add(&wi, dt / 2.0, &k1));
    let k3 = f(&add(&wi, dt / 2.0, &k2));
    let mut w4 = add(&wi, dt, &k3);
    e_half(&mut w4);
    let k4 = f(&w4);
    let mut s: Vec<C64> = (0..w.len()).map(|i| wi[i] + dt / 6.0 * k1[i] + dt / 3.0 * (k2[i] + k3[i])).collect();
    e_half(&mut s);
    let mut out = add(&s, dt / 6.0, &k4);
    plane::backward(&mut out, g);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticePoint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid() -> Grid2 {
        Grid2::new(10.0, 16).unwrap()
    }

    fn random_state(seed: u64, trunc: i64) -> ResonantState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<(f64, f64)> = (0..(2 * trunc + 1).pow(2)).map(|_| (rng.random(), rng.random())).collect();
        let w = 2 * trunc + 1;
        ResonantState::from_fn(trunc, grid(), |p, x| {
            let (a, b) = coeffs[((p.a + trunc) * w + p.b + trunc) as usize];
            C64::new(a, b) * (-((x[0] - a).powi(2) + (x[1] + b).powi(2)) / 4.0).exp()
        })
        .unwrap()
    }

    #[test]
    fn single_component_reduces_to_cubic() {
        let table = ResonanceTable::build(2).unwrap();
        let v =
            ResonantState::from_fn(2, grid(), |p, x| if p == LatticePoint::ORIGIN { C64::new(x[0].cos(), x[1].sin()) } else { C64::new(0.0, 0.0) })
                .unwrap();
        let r = resonant_rhs(&v, &table).unwrap();
        for p in r.points() {
            let c = r.component(p).unwrap();
            if p == LatticePoint::ORIGIN {
                let u = v.component(p).unwrap();
                for (o, z) in c.iter().zip(u) {
                    assert!((o - z.norm_sqr() * z).norm() < 1e-15);
                }
            } else {
                assert!(c.iter().all(|z| z.norm() == 0.0));
            }
        }
    }

    #[test]
    fn rhs_commutes_with_conjugation() {
        let table = ResonanceTable::build(1).unwrap();
        let v = random_state(4, 1);
        let a = resonant_rhs(&v.conj(), &table).unwrap();
        let b = resonant_rhs(&v, &table).unwrap().conj();
        assert!(a.sub(&b).unwrap().mass() < 1e-28);
    }

    #[test]
    fn truncation_mismatch_rejected() {
        let table = ResonanceTable::build(1).unwrap();
        assert!(resonant_rhs(&random_state(1, 2), &table).is_err());
        let zero = ResonantState::zeros(1, grid()).unwrap();
        assert!(resonant_rhs(&zero, &table).unwrap().is_zero());
    }

    #[test]
    fn zero_state_stays_zero() {
        let cfg = ResonantStepperConfig::new(0.05, Arc::new(ResonanceTable::build(1).unwrap())).unwrap();
        let zero = ResonantState::zeros(1, grid()).unwrap();
        assert!(step_resonant(&zero, &cfg).unwrap().is_zero());
    }

    #[test]
    fn e_ls_nearly_conserved() {
        let cfg = ResonantStepperConfig::new(0.01, Arc::new(ResonanceTable::build(1).unwrap())).unwrap();
        let v = random_state(7, 1);
        let ev = evolve_resonant(&v, 0.2, &cfg, 1, false).unwrap();
        let (a, b) = (v.e_ls(), ev.final_state.e_ls());
        assert!((a - b).abs() < 1e-4 * a, "{a} {b}");
    }

    #[test]
    fn e_ls_drift_is_fourth_order() {
        let table = Arc::new(ResonanceTable::build(1).unwrap());
        let v = random_state(7, 1).scale(C64::new(0.5, 0.0));
        let drift = |dt: f64| {
            // The 2/3 mask removes a dt-independent amount per step, so the
            // time error is only visible without it.
            let mut cfg = ResonantStepperConfig::new(dt, table.clone()).unwrap();
            cfg.dealias = false;
            let ev = evolve_resonant(&v, 0.4, &cfg, 1, false).unwrap();
            (ev.final_state.e_ls() - v.e_ls()).abs()
        };
        let (a, b, c) = (drift(0.04), drift(0.02), drift(0.01));
        assert!((14.0..=18.0).contains(&(a / b)), "ratio {}", a / b);
        assert!((14.0..=18.0).contains(&(b / c)), "ratio {}", b / c);
    }

    #[test]
    fn scalar_stepper_matches_single_component() {
        let g = grid();
        let table = Arc::new(ResonanceTable::build(2).unwrap());
        let cfg = ResonantStepperConfig::new(0.02, table).unwrap();
        let v = ResonantState::from_fn(2, g, |p, x| {
            if p == LatticePoint::ORIGIN {
                C64::new(1.2 * (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .unwrap();
        let a = step_resonant(&v, &cfg).unwrap();
        let b = scalar_nls2d_step(v.component(LatticePoint::ORIGIN).unwrap(), &g, 0.02, true);
        for (x, y) in a.component(LatticePoint::ORIGIN).unwrap().iter().zip(&b) {
            assert!((x - y).norm() < 1e-10);
        }
    }
}
