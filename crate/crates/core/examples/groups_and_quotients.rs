//! Finitely generated abelian groups, subgroups, and quotients.

use blockmonoid::group::FgGroup;
use blockmonoid::subgroup::{intersect_cyclic, quotient_structure, subgroup_from, SubgroupBasis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = FgGroup::new(1, vec![2, 4])?;
    let x = g.from_flat(&[3, 1, 2])?;
    println!("G = {g}, x = {x}, 2x = {}, ord(x) = {:?}", g.scale(2, &x)?, g.element_order(&x));

    let z2 = FgGroup::free(2);
    let gens = [z2.from_flat(&[2, 0])?, z2.from_flat(&[1, 1])?];
    let s = subgroup_from(&z2, &gens)?;
    let q = quotient_structure(&SubgroupBasis::whole(&z2), &s)?;
    println!("Z² / ⟨(2,0), (1,1)⟩ = {} (rank of subgroup {})", q.group(), s.rank());
    for v in [[1, 0], [0, 1], [3, 1]] {
        let e = z2.from_flat(&v)?;
        println!("  {e} -> {}", q.project(&e)?);
    }

    let a = z2.from_flat(&[-1, -2])?;
    let line = intersect_cyclic(&SubgroupBasis::whole(&z2), &a)?;
    let gamma = quotient_structure(&SubgroupBasis::whole(&z2), &line)?;
    println!("Z² / Z·{a} = {}", gamma.group());
    Ok(())
}
