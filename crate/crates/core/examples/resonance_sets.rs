//! Enumerate a resonance set both ways and print the weight sums around it.

use std::collections::BTreeSet;

use wglab::lattice::{enumerate_resonant_triples, enumerate_resonant_triples_fast, weight_sum, LatticePoint};

fn main() -> wglab::Result<()> {
    let j = LatticePoint::new(2, -1);
    let trunc = 6;
    let brute: BTreeSet<_> = enumerate_resonant_triples(j, trunc)?.into_iter().collect();
    let fast: BTreeSet<_> = enumerate_resonant_triples_fast(j, trunc)?.into_iter().collect();
    println!("j = ({}, {}), trunc {trunc}: {} triples, enumerators agree: {}", j.a, j.b, brute.len(), brute == fast);
    for t in brute.iter().take(5) {
        println!("  ({},{}) - ({},{}) + ({},{})", t.j1.a, t.j1.b, t.j2.a, t.j2.b, t.j3.a, t.j3.b);
    }

    println!("trunc,weight_sum");
    for k in [4, 8, 16, 32, 64] {
        println!("{k},{:.6}", weight_sum(j, k)?);
    }
    Ok(())
}
