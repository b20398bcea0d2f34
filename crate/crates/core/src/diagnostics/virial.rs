//! The truncated virial action and the local momentum identity.
//!
//! For `(i∂_t + Δ)u = |u|²u` the momentum density `Im[ū ∂_{x1} u]` obeys
//!
//! `∂_t Im[ū∂_{x1}u] = ½∂_{x1}Δ|u|² − 2 div Re[∂_{x1}ū ∇u] − ½∂_{x1}|u|⁴`,
//!
//! and the residual of this identity along a computed trajectory measures
//! the time error of the scheme.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::conserved::{energy, odd_freq};
use crate::error::{Error, Result};
use crate::field::norms::mass;
use crate::field::{eta, Repr, Trajectory, WaveguideField};

/// Constant in `|A_R| ≤ c·R·(M·E)^{1/2}` for the η cutoff:
/// `|χ(s/R)s| ≤ 2R` and `|∫ Im ū∂u| ≤ ‖u‖‖∇u‖ ≤ M^{1/2}(2E)^{1/2}`.
pub const VIRIAL_BOUND_CONSTANT: f64 = 2.0 * SQRT_2;

/// Cutoff radius and center path `x̲1(t)` of the virial action.
#[derive(Clone)]
pub struct VirialConfig {
    pub radius: f64,
    pub center: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for VirialConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VirialConfig").field("radius", &self.radius).finish_non_exhaustive()
    }
}

impl VirialConfig {
    pub fn new(radius: f64, center: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::arg(format!("radius must be > 0, got {radius}")));
        }
        Ok(VirialConfig { radius, center: Arc::new(center) })
    }

    /// Fixed center at `x1 = 0`.
    pub fn centered(radius: f64) -> Result<Self> {
        Self::new(radius, |_| 0.0)
    }

    pub fn check_fits(&self, box_side: f64) -> Result<()> {
        if 2.0 * self.radius >= box_side / 2.0 {
            return Err(Error::arg(format!("cutoff radius {} does not fit the box: need 2R < L/2 = {}", self.radius, box_side / 2.0)));
        }
        Ok(())
    }
}

/// `∂_{x_k} f` spectrally; the unpaired Nyquist mode is dropped on x axes.
pub fn derivative(f: &WaveguideField, axis: usize) -> WaveguideField {
    let (l, n) = (f.spec().box_side, f.spec().nx);
    f.with_symbol(|z| {
        let xi = if axis < 2 { odd_freq(z[axis], l, n) } else { z[axis] };
        C64::new(0.0, xi)
    })
    .into_physical()
}

fn real_field(like: &WaveguideField, values: Vec<f64>) -> WaveguideField {
    let data = values.into_iter().map(|v| C64::new(v, 0.0)).collect();
    WaveguideField::from_data(like.spec(), Repr::Physical, data).expect("finite values of the same grid")
}

/// `A_R(t) = ∫ χ_R(x1 − x̲1(t)) (x1 − x̲1(t)) Im[ū ∂_{x1} u]`, with the offset
/// taken periodically in the box.
pub fn virial_action(f: &WaveguideField, cfg: &VirialConfig, t: f64) -> Result<f64> {
    let spec = f.spec();
    cfg.check_fits(spec.box_side)?;
    let u = f.physical();
    let du = derivative(&u, 0);
    let c = (cfg.center)(t);
    let l = spec.box_side;
    let xs = spec.x_axis().coords();
    let block = spec.len() / spec.nx;
    let r = cfg.radius;
    let total = crate::par::sum_index(spec.len(), |i| {
        let s = (xs[i / block] - c + l / 2.0).rem_euclid(l) - l / 2.0;
        let w = eta(s.abs() / r) * s;
        w * (u.data()[i].conj() * du.data()[i]).im
    });
    Ok(total * spec.cell_volume())
}

/// `c·R·(M·E)^{1/2}`, the bound `|A_R|` must stay under.
pub fn virial_bound(f: &WaveguideField, radius: f64) -> f64 {
    VIRIAL_BOUND_CONSTANT * radius * (mass(f) * energy(f)).sqrt()
}

/// `Im[ū ∂_{x1} u]` on the grid.
pub fn momentum_density(f: &WaveguideField) -> Vec<f64> {
    let u = f.physical();
    let du = derivative(&u, 0);
    u.data().iter().zip(du.data()).map(|(a, b)| (a.conj() * b).im).collect()
}

/// Right side of the momentum identity at one time.
pub fn momentum_identity_rhs(f: &WaveguideField) -> Vec<f64> {
    identity_rhs(f, 1.0)
}

// `rho` scales the nonlinear pressure term; 0 gives the linear identity
fn identity_rhs(f: &WaveguideField, rho: f64) -> Vec<f64> {
    let u = f.physical();
    let (l, n) = (u.spec().box_side, u.spec().nx);
    let grads: Vec<WaveguideField> = (0..4).map(|k| derivative(&u, k)).collect();
    let d1 = &grads[0];

    let dens = real_field(&u, u.data().iter().map(|v| v.norm_sqr()).collect());
    let quart = real_field(&u, u.data().iter().map(|v| v.norm_sqr() * v.norm_sqr()).collect());
    // ½∂1Δ|u|² − ½∂1|u|⁴ in one multiplier pass each
    let lap_term = dens.with_symbol(|z| {
        let r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3];
        C64::new(0.0, -0.5 * odd_freq(z[0], l, n) * r2)
    });
    let quart_term = quart.with_symbol(|z| C64::new(0.0, -0.5 * rho * odd_freq(z[0], l, n)));

    let mut out: Vec<f64> = lap_term.into_physical().data().iter().zip(quart_term.into_physical().data()).map(|(a, b)| a.re + b.re).collect();
    for (k, g) in grads.iter().enumerate() {
        let flux = real_field(&u, d1.data().iter().zip(g.data()).map(|(a, b)| (a.conj() * b).re).collect());
        let div = derivative(&flux, k);
        out.iter_mut().zip(div.data()).for_each(|(o, d)| *o -= 2.0 * d.re);
    }
    out
}

/// `L²` norm of `∂_t Im[ū∂_{x1}u] − rhs` at sample `k`, the time derivative
/// taken as a central difference over samples `k ± 1` spaced by `dt`.
pub fn momentum_identity_residual(traj: &Trajectory<WaveguideField>, k: usize, dt: f64) -> Result<f64> {
    if k == 0 || k + 1 >= traj.len() {
        return Err(Error::arg(format!("sample {k} needs neighbours in a trajectory of {} samples", traj.len())));
    }
    for pair in [(k - 1, k), (k, k + 1)] {
        let gap = traj.times[pair.1] - traj.times[pair.0];
        if (gap - dt).abs() > 1e-9 * dt.max(1.0) {
            return Err(Error::arg(format!("samples {} and {} are {gap} apart, not dt = {dt}", pair.0, pair.1)));
        }
    }
    let before = momentum_density(&traj.states[k - 1]);
    let after = momentum_density(&traj.states[k + 1]);
    let rhs = momentum_identity_rhs(&traj.states[k]);
    let spec = traj.states[k].spec();
    let sq: f64 = (0..rhs.len())
        .map(|i| {
            let d = (after[i] - before[i]) / (2.0 * dt) - rhs[i];
            d * d
        })
        .sum();
    Ok((sq * spec.cell_volume()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{evolve_nls, EvolveOptions, NlsStepperConfig};
    use crate::field::{Dealias, GridSpec};
    use std::f64::consts::TAU;

    fn spec() -> GridSpec {
        GridSpec::new(16.0, 64, 9, 0.01).unwrap()
    }

    fn packet(s: &GridSpec, amp: f64) -> WaveguideField {
        let xi = TAU / 16.0 * 2.0;
        WaveguideField::from_fn(s, |p| {
            let env = amp * (-(p[0] * p[0] + p[1] * p[1]) / 2.0).exp() * (1.0 + 0.3 * p[2].cos());
            C64::from_polar(env, xi * p[0])
        })
    }

    #[test]
    fn real_fields_have_no_action() {
        let s = spec();
        let f = WaveguideField::from_fn(&s, |p| C64::new((-(p[0] - 1.0).powi(2) - p[1] * p[1]).exp(), 0.0));
        let cfg = VirialConfig::centered(3.0).unwrap();
        assert!(virial_action(&f, &cfg, 0.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn even_profile_about_center_has_no_action() {
        let s = spec();
        // momentum density even about x1 = 1, so the weighted integrand is odd
        let w = TAU / 16.0;
        let g = WaveguideField::from_fn(&s, |p| {
            let d = p[0] - 1.0;
            C64::from_polar((-d * d - p[1] * p[1]).exp(), 0.7 * (w * d).sin())
        });
        let cfg = VirialConfig::new(3.0, |_| 1.0).unwrap();
        assert!(momentum_density(&g).iter().any(|v| v.abs() > 1e-3));
        assert!(virial_action(&g, &cfg, 0.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn action_is_quadratic_and_bounded() {
        let s = spec();
        let f = packet(&s, 0.5);
        let cfg = VirialConfig::new(3.0, |_| -1.0).unwrap();
        let a = virial_action(&f, &cfg, 0.0).unwrap();
        let b = virial_action(&f.scale_real(2.0), &cfg, 0.0).unwrap();
        assert!(a.abs() > 1e-3);
        assert!((b - 4.0 * a).abs() < 1e-12 * b.abs());
        assert!(a.abs() <= virial_bound(&f, 3.0));
    }

    #[test]
    fn oversized_cutoff_rejected() {
        let f = packet(&spec(), 0.5);
        assert!(virial_action(&f, &VirialConfig::centered(4.0).unwrap(), 0.0).is_err());
        assert!(VirialConfig::centered(0.0).is_err());
    }

    #[test]
    fn zero_field_residual_vanishes() {
        let s = spec();
        let mut traj = Trajectory::new();
        for k in 0..3 {
            traj.push(k as f64 * 0.01, WaveguideField::zeros(&s));
        }
        assert_eq!(momentum_identity_residual(&traj, 1, 0.01).unwrap(), 0.0);
        assert!(momentum_identity_residual(&traj, 0, 0.01).is_err());
        assert!(momentum_identity_residual(&traj, 1, 0.02).is_err());
    }

    fn residual(dt: f64) -> f64 {
        let s = spec();
        let f = packet(&s, 0.8);
        let cfg = NlsStepperConfig::new(dt).unwrap().with_dealias(Dealias::Off);
        let opts = EvolveOptions { keep_trajectory: true, record_diagnostics: false, ..Default::default() };
        let ev = evolve_nls(&f, 4.0 * dt, &cfg, &opts, None).unwrap();
        momentum_identity_residual(&ev.trajectory, 2, dt).unwrap()
    }

    #[test]
    fn linear_identity_is_second_order() {
        let res = |dt: f64| {
            let f = packet(&spec(), 0.8);
            let cfg = NlsStepperConfig::new(dt).unwrap().with_dealias(Dealias::Off).linear_only();
            let opts = EvolveOptions { keep_trajectory: true, record_diagnostics: false, ..Default::default() };
            let tr = evolve_nls(&f, 3.0 * dt, &cfg, &opts, None).unwrap().trajectory;
            let (a, b) = (momentum_density(&tr.states[1]), momentum_density(&tr.states[3]));
            let r = identity_rhs(&tr.states[2], 0.0);
            (0..r.len()).map(|i| ((b[i] - a[i]) / (2.0 * dt) - r[i]).powi(2)).sum::<f64>().sqrt()
        };
        assert!(res(0.02) / res(0.01) >= 3.5);
    }

    #[test]
    fn identity_residual_is_second_order() {
        let (a, b) = (residual(0.02), residual(0.01));
        assert!(a / b >= 3.5, "{a} {b}");
    }

    #[test]
    fn plane_wave_linear_flow_satisfies_identity() {
        let s = spec();
        let f = WaveguideField::plane_wave(&s, C64::new(0.7, 0.0), [TAU / 16.0 * 3.0, 0.0, 1.0, 0.0]);
        let cfg = NlsStepperConfig::new(0.01).unwrap().linear_only();
        let opts = EvolveOptions { keep_trajectory: true, record_diagnostics: false, ..Default::default() };
        let ev = evolve_nls(&f, 0.02, &cfg, &opts, None).unwrap();
        assert!(momentum_identity_residual(&ev.trajectory, 1, 0.01).unwrap() <= 1e-8);
    }
}
