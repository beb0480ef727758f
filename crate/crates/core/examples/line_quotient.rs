//! G₀ = G₁ ∪ {a} with G₁ ⊂ N₀² and a negative: transfer to zero-sum sequences
//! over Γ = ⟨G₁⟩ / (⟨G₁⟩ ∩ Z·a).

use blockmonoid::constructions::{line_quotient_transfer, parabola_family, square_family};
use blockmonoid::group::FgGroup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let z2 = FgGroup::free(2);
    let n = 30;
    let r = line_quotient_transfer(&parabola_family(n), &z2.from_flat(&[-1, -2])?)?;
    let images = r.integer_images.clone().unwrap_or_default();
    println!(
        "parabola, N = {n}: Γ = {}, images {}..={} ({} values), condensed {}, generators {:?}",
        r.gamma,
        images.first().unwrap(),
        images.last().unwrap(),
        images.len(),
        r.condensed,
        r.generators
    );

    for a in [[-1, -1], [-2, -2], [-2, -3]] {
        let r = line_quotient_transfer(&square_family(4), &z2.from_flat(&a)?)?;
        println!("square, N = 4, a = {a:?}: Γ = {}, {} images, condensed {}", r.gamma, r.images.len(), r.condensed);
    }
    Ok(())
}
