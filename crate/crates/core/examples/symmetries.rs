//! Galilean boosts commute with the flow; rescaling keeps `‖∇u‖`.
//!
//! The boost shifts the spectrum, so the grid needs room above the data's
//! band or wrapped modes show up as a defect.

use num_complex::Complex64 as C64;
use wglab::evolution::symmetry::round_to_dual_lattice;
use wglab::evolution::{evolve_nls, galilean_boost, rescale_solution, EvolveOptions, NlsStepperConfig};
use wglab::field::norms::{grad_sq, h1_distance, mass};
use wglab::field::{Dealias, GridSpec, WaveguideField};

fn main() -> wglab::Result<()> {
    let spec = GridSpec::new(16.0, 64, 5, 0.01)?;
    let u0 = WaveguideField::from_fn(&spec, |p| C64::new(0.5 * (-(p[0] * p[0] + p[1] * p[1]) / 2.0).exp() * (1.0 + 0.3 * p[3].cos()), 0.0));
    let xi = round_to_dual_lattice(&spec, [0.8, -0.4]);
    let cfg = NlsStepperConfig::new(0.01)?.with_dealias(Dealias::Off);
    let opts = EvolveOptions { record_diagnostics: false, ..Default::default() };
    let t = 0.2;

    let then_boost = galilean_boost(&evolve_nls(&u0, t, &cfg, &opts, None)?.final_state, xi, t)?;
    let boost_then = evolve_nls(&galilean_boost(&u0, xi, 0.0)?, t, &cfg, &opts, None)?.final_state;
    println!("boost xi = ({:.4}, {:.4}), commutation defect {:.3e}", xi[0], xi[1], h1_distance(&then_boost, &boost_then)?);

    for lam in [0.5, 2.0, 4.0] {
        let r = rescale_solution(&u0, lam)?;
        println!("lambda {lam}: grad ratio {:.15}, mass ratio {:.15}", grad_sq(&r) / grad_sq(&u0), mass(&r) / mass(&u0));
    }
    Ok(())
}
