//! Weighted lattice-point sums on circles, with the cutoff `A` growing.

use wglab::lattice::{circle_lattice_points, circle_lattice_sum, LatticePoint};

fn main() -> wglab::Result<()> {
    // |p|² = 25: twelve points
    let origin = LatticePoint::new(0, 0);
    println!("points on |p| = 5: {}", circle_lattice_points(origin, 100)?.len());

    // radii with many representations as sums of two squares
    println!("r2,points,sum");
    for r2 in [25, 325, 5525, 160225] {
        let n = circle_lattice_points(origin, 4 * r2)?.len();
        println!("{r2},{n},{:.6e}", circle_lattice_sum(origin, 4 * r2, 1.0)?);
    }

    // half-integer center (3/2, -1/2): |2p - (3, -1)|² = 130
    let pts = circle_lattice_points(LatticePoint::new(3, -1), 130)?;
    println!("half-integer circle: {:?}", pts.iter().map(|p| (p.a, p.b)).collect::<Vec<_>>());
    Ok(())
}
