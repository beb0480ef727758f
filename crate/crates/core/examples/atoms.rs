//! Atoms (minimal zero-sum sequences) of B(G₀) and the exponents read off them.

use blockmonoid::group::FgGroup;
use blockmonoid::zerosum::{atoms_of, condense, GroundSet};

fn show(g0: &GroundSet) -> Result<(), Box<dyn std::error::Error>> {
    let atoms = atoms_of(g0)?;
    println!("{g0}: {} atoms, D = {}", atoms.len(), atoms.davenport());
    for a in atoms.atoms() {
        println!("  {a:?}");
    }
    for i in 0..g0.len() {
        if !atoms.containing(i).is_empty() {
            let e = atoms.exponent(i)?;
            println!("  {}: gcd {} min {}", g0.elements()[i], e.gcd, e.min);
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    show(&GroundSet::from_flat(FgGroup::cyclic(3)?, &[&[1], &[2]])?)?;
    show(&GroundSet::from_flat(FgGroup::new(1, vec![2])?, &[&[1, 1], &[-1, 0], &[0, 1]])?)?;
    show(&GroundSet::from_flat(FgGroup::free(2), &[&[1, 0], &[-2, 0], &[-3, 0]])?)?;

    let g0 = GroundSet::from_flat(FgGroup::free(1), &[&[1], &[2], &[-3]])?;
    let (c, kept) = condense(&g0)?;
    println!("condense {g0} -> {c} (kept {kept:?})");
    let g0 = GroundSet::from_flat(FgGroup::free(1), &[&[1], &[2]])?;
    println!("condense {g0} -> {}", condense(&g0)?.0);
    Ok(())
}
