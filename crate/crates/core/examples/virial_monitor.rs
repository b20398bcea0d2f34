//! The virial action of a moving packet against its a priori bound.

use num_complex::Complex64 as C64;
use wglab::diagnostics::{virial_action, virial_bound, VirialConfig};
use wglab::evolution::{evolve_nls, EvolveOptions, NlsStepperConfig};
use wglab::field::{Dealias, GridSpec, WaveguideField};

fn main() -> wglab::Result<()> {
    let spec = GridSpec::new(16.0, 32, 5, 0.01)?;
    let u0 = WaveguideField::from_fn(&spec, |p| {
        let g = (-((p[0] + 1.0).powi(2) + p[1] * p[1]) / 2.0).exp();
        C64::from_polar(0.8 * g, std::f64::consts::TAU / 16.0 * 2.0 * p[0])
    });
    let vcfg = VirialConfig::centered(3.0)?;
    let cfg = NlsStepperConfig::new(spec.dt)?.with_dealias(Dealias::Off);
    let opts = EvolveOptions { stride: 10, record_diagnostics: false, ..Default::default() };

    println!("time,action,bound");
    let mut obs = |_k: usize, t: f64, u: &WaveguideField| {
        let a = virial_action(u, &vcfg, t).expect("cutoff fits the box");
        println!("{t:.2},{a:.6},{:.6}", virial_bound(u, vcfg.radius));
    };
    evolve_nls(&u0, 1.0, &cfg, &opts, Some(&mut obs))?;
    Ok(())
}
