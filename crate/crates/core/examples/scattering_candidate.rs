//! Pull small data back by the free flow: the Cauchy gap shrinks.

use num_complex::Complex64 as C64;
use wglab::diagnostics::scattering_extract;
use wglab::evolution::{evolve_nls, EvolveOptions, NlsStepperConfig};
use wglab::field::{GridSpec, WaveguideField};

fn main() -> wglab::Result<()> {
    let spec = GridSpec::new(128.0, 64, 3, 0.05)?;
    let u0 = WaveguideField::from_fn(&spec, |p| C64::new(0.3 * (-(p[0] * p[0] + p[1] * p[1]) / 8.0).exp(), 0.0));
    let cfg = NlsStepperConfig::new(spec.dt)?;
    let opts = EvolveOptions { stride: 20, keep_trajectory: true, record_diagnostics: false };
    let traj = evolve_nls(&u0, 16.0, &cfg, &opts, None)?.trajectory;
    println!("t,gap(t,2t)");
    for t in [1.0, 2.0, 4.0, 8.0] {
        let (_, gap) = scattering_extract(&traj, t, 2.0 * t)?;
        println!("{t},{gap:.6e}");
    }
    Ok(())
}
