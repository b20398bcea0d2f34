//! Strang-split NLS on R² × T²: mass, energy and momentum along a run.

use num_complex::Complex64 as C64;
use wglab::evolution::{evolve_nls, EvolveOptions, NlsStepperConfig};
use wglab::field::{GridSpec, WaveguideField};

fn main() -> wglab::Result<()> {
    let spec = GridSpec::new(16.0, 32, 5, 0.005)?;
    let u0 = WaveguideField::from_fn(&spec, |p| {
        let g = (-(p[0] * p[0] + p[1] * p[1]) / 2.0).exp();
        C64::from_polar(0.6 * g, 0.8 * p[0]) * (1.0 + 0.5 * C64::from_polar(1.0, p[2]))
    });
    let cfg = NlsStepperConfig::new(spec.dt)?;
    let opts = EvolveOptions { stride: 20, ..Default::default() };
    let ev = evolve_nls(&u0, 0.5, &cfg, &opts, None)?;

    println!("time,mass,energy,momentum_x1");
    for r in &ev.records {
        println!("{:.3},{:.12},{:.12},{:.12}", r.time, r.mass, r.energy, r.momentum_x1);
    }
    Ok(())
}
