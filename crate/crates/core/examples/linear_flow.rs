//! The free flow is unitary and a group: `e^{itΔ}e^{isΔ} = e^{i(t+s)Δ}`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wglab::evolution::linear_propagate;
use wglab::field::norms::mass;
use wglab::field::{GridSpec, WaveguideField};

fn main() -> wglab::Result<()> {
    let spec = GridSpec::new(8.0, 32, 5, 0.01)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = WaveguideField::random_band_limited(&spec, &mut rng, 6.0, 1.0);

    let a = linear_propagate(&linear_propagate(&f, 0.3), 1.1);
    let b = linear_propagate(&f, 1.4);
    println!("mass before {:.12}, after {:.12}", mass(&f), mass(&b));
    println!("group defect {:.3e}", a.max_abs_diff(&b)?);
    println!("round trip defect {:.3e}", linear_propagate(&b, -1.4).max_abs_diff(&f)?);
    Ok(())
}
