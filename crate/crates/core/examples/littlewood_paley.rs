//! Dyadic shells of a random field: their masses and their sum.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wglab::field::norms::mass;
use wglab::field::{lp_project, resolved_shells, GridSpec, WaveguideField};

fn main() -> wglab::Result<()> {
    let spec = GridSpec::new(6.0, 32, 9, 0.01)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = WaveguideField::random_band_limited(&spec, &mut rng, f64::INFINITY, 1.5);

    let mut sum = WaveguideField::zeros(&spec);
    println!("N,mass_of_shell");
    for n in resolved_shells(&spec) {
        let p = lp_project(&f, n)?;
        println!("{n},{:.6e}", mass(&p));
        sum = sum.add(&p)?;
    }
    println!("resynthesis defect {:.3e}", sum.max_abs_diff(&f)?);
    Ok(())
}
