//! Concentrate a 4-D bump at scale `1/N` on the waveguide. `N²·mass` and the
//! gradient settle as the cutoff `η(|x|/√N)` opens up around the bump.

use num_complex::Complex64 as C64;
use wglab::field::norms::{grad_sq, mass};
use wglab::field::GridSpec;
use wglab::profiles::{euclidean_profile, EuclideanProfileSpec};

fn main() -> wglab::Result<()> {
    let waveguide = GridSpec::new(32.0 * std::f64::consts::TAU / 31.0, 32, 31, 0.01)?;
    let phi = |p: [f64; 4]| {
        let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
        C64::new((-r2 / (2.0 * 1.5 * 1.5)).exp(), 0.0)
    };
    println!("N,n2_mass,grad_sq");
    for n in [4.0, 8.0] {
        let f = euclidean_profile(&EuclideanProfileSpec::from_generator(&waveguide, n, phi)?)?;
        println!("{n},{:.6},{:.6}", n * n * mass(&f), grad_sq(&f));
    }
    Ok(())
}
