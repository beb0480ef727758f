//! Is B(G₀) ↪ F(G₀) a divisor theory? And what are the primes of B(G₀)?

use blockmonoid::diophantine::SearchLimits;
use blockmonoid::group::FgGroup;
use blockmonoid::refine::{classify_primes, divisor_theory_witness};
use blockmonoid::zerosum::{atoms_of, GroundSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        GroundSet::from_flat(FgGroup::free(1), &[&[-2], &[-1], &[0], &[1], &[2]])?,
        GroundSet::from_flat(FgGroup::cyclic(4)?, &[&[1], &[2]])?,
        GroundSet::from_flat(FgGroup::free(2), &[&[1, 0], &[-2, 0], &[-3, 0]])?,
    ];
    for g0 in &cases {
        match divisor_theory_witness(g0, SearchLimits::default())? {
            None => println!("{g0}: divisor theory"),
            Some(w) => println!(
                "{g0}: not a divisor theory ({}{} ∉ [G₀ \\ {{{}}}])",
                if w.negated { "-" } else { "" },
                g0.elements()[w.missing],
                g0.elements()[w.removed]
            ),
        }
        let atoms = atoms_of(g0)?;
        let p = classify_primes(&atoms)?;
        for (k, class) in p.classes.iter().enumerate() {
            let minimal = p.is_minimal_class(k);
            println!("  class {class:?}{}", if minimal { " (minimal)" } else { "" });
        }
        for (r, e) in p.reps.iter().zip(&p.e) {
            println!("  f(q) = {}, e = {}", g0.elements()[*r], e.gcd);
        }
    }
    Ok(())
}
