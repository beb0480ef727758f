//! A line G₁ and an anti-diagonal G₂ in Z^s: no atom of B(G₁ ∪ G₂) meets both.

use blockmonoid::group::FgGroup;
use blockmonoid::constructions::check_split_product;
use blockmonoid::zerosum::GroundSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g0 = GroundSet::from_flat(FgGroup::free(2), &[&[1, 2], &[-1, -2], &[1, -1], &[-2, 2]])?;
    let r = check_split_product(&g0, &[0, 1])?;
    println!("{g0}: {} atoms, split holds: {}", r.atoms, r.holds);

    let g0 = GroundSet::from_flat(FgGroup::free(3), &[&[2, 1, 6], &[-4, -2, -12], &[3, -3, 1], &[-1, 1, 0], &[-2, 2, -1]])?;
    let r = check_split_product(&g0, &[0, 1])?;
    println!("{g0}: {} atoms, split holds: {}", r.atoms, r.holds);

    let bad = GroundSet::from_flat(FgGroup::free(2), &[&[1, -1], &[2, 1]])?;
    println!("{bad} with G₁ = {{(1,-1)}}: {}", check_split_product(&bad, &[0]).unwrap_err());
    Ok(())
}
