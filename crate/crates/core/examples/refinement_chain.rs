//! Iterating block homomorphisms down to a divisor theory, and checking that
//! the composite is a transfer homomorphism on short sequences.

use blockmonoid::group::FgGroup;
use blockmonoid::refine::{refine_chain, verify_transfer, RefineOptions};
use blockmonoid::zerosum::GroundSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        GroundSet::from_flat(FgGroup::cyclic(4)?, &[&[1], &[2]])?,
        GroundSet::from_flat(FgGroup::free(1), &[&[1], &[-2]])?,
        GroundSet::from_flat(FgGroup::new(1, vec![2])?, &[&[1, 1], &[-1, 0], &[0, 1], &[-2, 1]])?,
    ];
    for g0 in &cases {
        let chain = refine_chain(g0, RefineOptions::default())?;
        println!("{chain}");
        for (i, s) in chain.steps.iter().enumerate() {
            let d = &s.diagnostics;
            println!(
                "  step {i}: class group {}, rank {} -> {}, index map {:?}",
                s.class_group, d.source_rank, d.class_group_rank, s.index_map
            );
        }
        let report = verify_transfer(&chain, 8)?;
        println!("  checked {} sequences, {} violations", report.checked, report.violations.len());
    }
    Ok(())
}
