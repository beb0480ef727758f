#![allow(dead_code)]

use blockmonoid::group::{FgGroup, GroupElement};
use blockmonoid::zerosum::{condense, GroundSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_251_016;

/// `BLOCKMONOID_SEED` if set, otherwise [`DEFAULT_SEED`].
pub fn seed() -> u64 {
    std::env::var("BLOCKMONOID_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED)
}

/// An independent stream per use site.
pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}

pub fn random_element(rng: &mut ChaCha8Rng, g: &FgGroup, span: i64) -> GroupElement {
    let free = (0..g.rank()).map(|_| rng.gen_range(-span..=span)).collect();
    let tors = g.torsion().iter().map(|&n| rng.gen_range(0..n)).collect();
    g.element(free, tors).unwrap()
}

/// `size` distinct random elements (fewer if the group is too small).
pub fn random_ground(rng: &mut ChaCha8Rng, g: &FgGroup, size: usize, span: i64) -> GroundSet {
    let mut els: Vec<GroupElement> = Vec::new();
    let cap = g.order().map_or(size, |o| size.min(o as usize));
    while els.len() < cap {
        let e = random_element(rng, g, span);
        if !els.contains(&e) {
            els.push(e);
        }
    }
    GroundSet::new(g.clone(), els).unwrap()
}

/// A nonempty condensed ground set of at most `max_size` elements.
pub fn random_condensed(rng: &mut ChaCha8Rng, g: &FgGroup, max_size: usize, span: i64) -> GroundSet {
    loop {
        let size = rng.gen_range(1..=max_size);
        let (c, _) = condense(&random_ground(rng, g, size, span)).unwrap();
        if !c.is_empty() {
            return c;
        }
    }
}

fn flat_sum_is_zero(g: &FgGroup, flats: &[Vec<i64>], x: &[u32]) -> bool {
    (0..g.dim()).all(|c| {
        let s: i128 = flats.iter().zip(x).map(|(f, &m)| f[c] as i128 * m as i128).sum();
        if c < g.rank() {
            s == 0
        } else {
            s.rem_euclid(g.torsion()[c - g.rank()] as i128) == 0
        }
    })
}

/// Every minimal nonzero zero-sum multiplicity vector of total degree at most
/// `max_degree`, by exhaustive enumeration and a domination filter.
pub fn naive_minimal(g0: &GroundSet, max_degree: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    let g = g0.group();
    let flats: Vec<Vec<i64>> = g0.elements().iter().map(|e| e.to_flat()).collect();
    let mut all = Vec::new();
    rec(0, max_degree, &mut vec![0; g0.len()], &mut all);
    let mut zero_sum: Vec<Vec<u32>> = all
        .into_iter()
        .filter(|x| x.iter().any(|&m| m > 0) && flat_sum_is_zero(g, &flats, x))
        .collect();
    zero_sum.sort_by_key(|x| x.iter().sum::<u32>());
    let mut minimal: Vec<Vec<u32>> = Vec::new();
    for x in zero_sum {
        if !minimal.iter().any(|m| m.iter().zip(&x).all(|(a, b)| a <= b)) {
            minimal.push(x);
        }
    }
    minimal.sort();
    minimal
}

/// A ground set in Z² with `G₁` on a line of slope `k₂ ≠ -1` and `G₂` on the
/// anti-diagonal, shuffled; returns it with the indices of `G₁`.
pub fn split_instance(rng: &mut ChaCha8Rng) -> (GroundSet, Vec<usize>) {
    let z2 = FgGroup::free(2);
    let (p, q) = loop {
        let p: i64 = rng.gen_range(-3..=3);
        let q: i64 = rng.gen_range(1..=3);
        if p != -q {
            break (p, q);
        }
    };
    let g = num_integer::gcd(p, q);
    let dir = [q / g, p / g];
    let mut g1: Vec<i64> = (-3..=3).filter(|&t| t != 0).collect();
    g1.shuffle(rng);
    g1.truncate(rng.gen_range(1..=3));
    let mut g2: Vec<i64> = (-4..=4).filter(|&t| t != 0).collect();
    g2.shuffle(rng);
    g2.truncate(rng.gen_range(1..=3));
    let mut tagged: Vec<(bool, GroupElement)> = g1
        .iter()
        .map(|&t| (true, z2.from_flat(&[t * dir[0], t * dir[1]]).unwrap()))
        .chain(g2.iter().map(|&b| (false, z2.from_flat(&[b, -b]).unwrap())))
        .collect();
    tagged.shuffle(rng);
    let idx = tagged.iter().enumerate().filter(|(_, (first, _))| *first).map(|(i, _)| i).collect();
    let g0 = GroundSet::new(z2, tagged.into_iter().map(|(_, e)| e).collect()).unwrap();
    (g0, idx)
}

pub fn gs(group: FgGroup, els: &[&[i64]]) -> GroundSet {
    GroundSet::from_flat(group, els).unwrap()
}

/// Small named instances used across the suites.
pub fn bundled_instances() -> Vec<(&'static str, GroundSet)> {
    let c = |n| FgGroup::cyclic(n).unwrap();
    vec![
        ("{1,2} ⊂ C4", gs(c(4), &[&[1], &[2]])),
        ("{1,2} ⊂ C3", gs(c(3), &[&[1], &[2]])),
        ("{1,-2} ⊂ Z", gs(FgGroup::free(1), &[&[1], &[-2]])),
        ("{-2,-1,0,1,2} ⊂ Z", gs(FgGroup::free(1), &[&[-2], &[-1], &[0], &[1], &[2]])),
        ("{(1,0),(-2,0),(-3,0)} ⊂ Z²", gs(FgGroup::free(2), &[&[1, 0], &[-2, 0], &[-3, 0]])),
        ("{1,2,3} ⊂ C6", gs(c(6), &[&[1], &[2], &[3]])),
        ("{(1|1),(-1|0),(0|1),(-2|1)} ⊂ Z⊕Z/2", gs(FgGroup::new(1, vec![2]).unwrap(), &[&[1, 1], &[-1, 0], &[0, 1], &[-2, 1]])),
        ("{(1,0),(0,1),(1,3)} ⊂ Z/2⊕Z/4", gs(FgGroup::new(0, vec![2, 4]).unwrap(), &[&[1, 0], &[0, 1], &[1, 3]])),
        ("{(1,2),(-1,-2),(1,-1),(-2,2)} ⊂ Z²", gs(FgGroup::free(2), &[&[1, 2], &[-1, -2], &[1, -1], &[-2, 2]])),
        ("{3,-2} ⊂ Z", gs(FgGroup::free(1), &[&[3], &[-2]])),
    ]
}
