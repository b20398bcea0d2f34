//! Frames act as isometries and compose up to a phase.

use num_complex::Complex64 as C64;
use wglab::field::norms::mass;
use wglab::field::{GridSpec, WaveguideField};
use wglab::profiles::{frame_apply, frame_apply_inverse, FrameElement};

fn main() -> wglab::Result<()> {
    let spec = GridSpec::new(16.0, 32, 5, 0.01)?;
    let h = spec.hx();
    let unit = std::f64::consts::TAU / spec.box_side;
    let f = WaveguideField::from_fn(&spec, |p| C64::new((-(p[0] * p[0] + p[1] * p[1]) / 2.0).exp(), 0.2 * p[2].sin()));

    // the composed shift picks up 2·t0·ξ, which must land on the grid too
    let t0 = 2.0 * std::f64::consts::FRAC_1_PI;
    let inner = FrameElement::new(1.0, t0, [2.0 * h, 0.0, 0.0, 0.0], [unit, 0.0])?;
    let outer = FrameElement::new(1.0, -0.1, [0.0, -h, 0.0, 0.0], [0.0, 2.0 * unit])?;
    let g = frame_apply(&f, &inner)?;
    println!("mass {:.12} -> {:.12}", mass(&f), mass(&g));
    println!("inverse defect {:.3e}", frame_apply_inverse(&g, &inner)?.max_abs_diff(&f)?);

    let (both, phase) = outer.compose(&inner);
    let direct = frame_apply(&g, &outer)?;
    let composed = frame_apply(&f, &both)?.scale(phase);
    println!("composition defect {:.3e}", direct.max_abs_diff(&composed)?);
    Ok(())
}
