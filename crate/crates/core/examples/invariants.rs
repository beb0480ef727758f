//! Factorizations and arithmetic invariants, bounded by sequence length.

use std::sync::Arc;

use blockmonoid::factorization::{catenary_degree, delta_star_bounded, factorizations, length_set, sweep, tame_bounded};
use blockmonoid::group::FgGroup;
use blockmonoid::zerosum::{atoms_of, GroundSet, ZSequence};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g0 = Arc::new(GroundSet::from_flat(FgGroup::cyclic(5)?, &[&[1], &[2], &[3], &[4]])?);
    let atoms = atoms_of(&g0)?;
    let b = ZSequence::new(g0.clone(), vec![5, 0, 0, 5])?;
    println!("B = 1⁵·4⁵ over {g0}");
    for z in factorizations(&b, &atoms)? {
        println!("  factorization of length {}: {:?}", z.len(), z.counts());
    }
    println!("  L(B) = {:?}, c(B) = {}", length_set(&b, &atoms)?.as_vec(), catenary_degree(&b, &atoms)?);

    let r = sweep(&g0, 8)?;
    let a = &r.aggregate;
    println!("|B| ≤ 8: Δ = {:?}, c = {}, D = {}, max |Z(B)| = {}", a.delta, a.catenary, a.davenport, a.max_factorizations);
    println!("Δ* (|B| ≤ 8) = {:?}", delta_star_bounded(&g0, 8)?);
    println!("t(B(G₀), atom 0) at |B| ≤ 8 = {}", tame_bounded(&g0, 0, 8)?);
    Ok(())
}
