//! A large-scale profile and its resonant-system approximation at one `M`.

use num_complex::Complex64 as C64;
use wglab::field::norms::h1;
use wglab::field::{GridSpec, WaveguideField};
use wglab::profiles::{large_scale_profile, ls_approximation_experiment, LargeScaleProfileSpec, LsExperimentConfig};

fn main() -> wglab::Result<()> {
    let spec = GridSpec::new(16.0, 32, 5, 0.02)?;
    let psi = WaveguideField::from_fn(&spec, |p| {
        let g = (-(p[0] * p[0] + p[1] * p[1]) / 4.0).exp();
        C64::new(0.8 * g, 0.0) + C64::from_polar(0.6 * g, p[2])
    });
    for m in [1.0, 0.5] {
        let f = large_scale_profile(&LargeScaleProfileSpec::new(psi.clone(), m)?)?;
        println!("M = {m}: box {:.1}, H1 {:.6}", f.spec().box_side, h1(&f));
    }
    let cfg = LsExperimentConfig { t0: 0.24, dt: 0.02, trunc: 1, nonlinear: true, max_steps: 20_000 };
    for r in ls_approximation_experiment(&psi, &[1.0, 0.5], &cfg)? {
        println!("M = {}: horizon {}, relative error {:.4}", r.scale, r.time_horizon, r.rel_error);
    }
    Ok(())
}
