//! Strichartz quotients of one random datum across dyadic levels.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wglab::diagnostics::{strichartz_quotient, StrichartzProbeConfig};
use wglab::field::{GridSpec, WaveguideField};

fn main() -> wglab::Result<()> {
    let spec = GridSpec::new(4.0, 16, 5, 0.01)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let u0 = WaveguideField::random_band_limited(&spec, &mut rng, 16.0, 1.0);
    println!("N,quotient");
    for n in [1, 2, 4, 8] {
        let mut cfg = StrichartzProbeConfig::new(4.0, n)?;
        cfg.windows = 2;
        cfg.nodes_per_window = 32;
        println!("{n},{:.6}", strichartz_quotient(&u0, &cfg)?);
    }
    Ok(())
}
