//! Finite-horizon scattering candidates: pull the solution back by the
//! linear flow and measure how much the pullback still moves.

use crate::error::{Error, Result};
use crate::evolution::linear::linear_propagate;
use crate::field::norms::h1_distance;
use crate::field::{ResonantNormKind, ResonantState, Trajectory, WaveguideField};

fn check_times(t1: f64, t2: f64) -> Result<()> {
    if !(t2 > t1 && t1 > 0.0) {
        return Err(Error::arg(format!("need 0 < t1 < t2, got t1 = {t1}, t2 = {t2}")));
    }
    Ok(())
}

/// Returns `e^{−it2Δ}u(t2)` and `‖e^{−it1Δ}u(t1) − e^{−it2Δ}u(t2)‖_{H¹}`.
pub fn scattering_extract(traj: &Trajectory<WaveguideField>, t1: f64, t2: f64) -> Result<(WaveguideField, f64)> {
    check_times(t1, t2)?;
    let a = linear_propagate(traj.at(t1)?, -t1);
    let b = linear_propagate(traj.at(t2)?, -t2);
    let gap = h1_distance(&a, &b)?;
    Ok((b, gap))
}

/// The resonant analogue with the component-wise flow `e^{itΔ_x}` and the
/// gap measured in `h¹L²`.
pub fn resonant_scattering_extract(traj: &Trajectory<ResonantState>, t1: f64, t2: f64) -> Result<(ResonantState, f64)> {
    check_times(t1, t2)?;
    let a = traj.at(t1)?.linear_flow(-t1);
    let b = traj.at(t2)?.linear_flow(-t2);
    let gap = a.sub(&b)?.norm(ResonantNormKind::H1L2);
    Ok((b, gap))
}
