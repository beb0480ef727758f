//! The on-disk atom cache: a cold run computes and stores, a warm run reads.

use blockmonoid::cache::{cache_key, AtomCache};
use blockmonoid::diophantine::SearchLimits;
use blockmonoid::group::FgGroup;
use blockmonoid::zerosum::GroundSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let cache = AtomCache::new(dir.path());
    let g0 = GroundSet::from_flat(FgGroup::new(0, vec![2, 4])?, &[&[1, 0], &[0, 1], &[1, 3]])?;
    println!("key {}", cache_key(&g0));
    let (cold, hit) = cache.atoms(&g0, SearchLimits::default())?;
    println!("first lookup hit: {hit}, {} atoms", cold.len());
    let (warm, hit) = cache.atoms(&g0, SearchLimits::default())?;
    println!("second lookup hit: {hit}, identical: {}", cold == warm);
    Ok(())
}
