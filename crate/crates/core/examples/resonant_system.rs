//! The resonant system at truncation 2: `E_ls` stays put while energy moves
//! between torus modes.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use wglab::evolution::{evolve_resonant, ResonantStepperConfig};
use wglab::field::{Grid2, ResonantState};
use wglab::lattice::{LatticePoint, ResonanceTable};

fn main() -> wglab::Result<()> {
    let grid = Grid2::new(16.0, 32)?;
    let v0 = ResonantState::from_fn(2, grid, |p, x| {
        let g = (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp();
        match (p.a, p.b) {
            (0, 0) => C64::new(g, 0.0),
            (1, 1) => C64::new(0.0, 0.7 * g),
            _ => C64::new(0.0, 0.0),
        }
    })?;
    let table = Arc::new(ResonanceTable::build(2)?);
    println!("resonant triples in the table: {}", table.total_triples());
    let cfg = ResonantStepperConfig::new(0.01, table)?;
    let ev = evolve_resonant(&v0, 1.0, &cfg, 25, true)?;

    println!("time,e_ls,mass_00,mass_11,mass_10");
    for (t, v) in ev.trajectory.times.iter().zip(&ev.trajectory.states) {
        println!(
            "{t:.2},{:.12},{:.6},{:.6},{:.6}",
            v.e_ls(),
            v.l2_sq(LatticePoint::new(0, 0)),
            v.l2_sq(LatticePoint::new(1, 1)),
            v.l2_sq(LatticePoint::new(1, 0))
        );
    }
    Ok(())
}
