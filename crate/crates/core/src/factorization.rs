//! Factorizations of zero-sum sequences into atoms and the arithmetic
//! invariants derived from them.
//!
//! Every monoid-level quantity here (`c`, `t`, `Δ`, `Δ*`) is a sweep over the
//! zero-sum sequences of length at most `maxlen`. The result is a lower bound
//! for the true invariant that is monotone in `maxlen`; nothing here claims
//! the bound has stabilized.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zerosum::{atoms_of, AtomSet, GroundSet, ZSequence};

/// Largest ground set accepted by [`delta_star_bounded`].
pub const DELTA_STAR_MAX_ELEMENTS: usize = 16;

/// A factorization: how many times each atom is used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    atomset: Arc<AtomSet>,
    counts: Vec<u32>,
}

impl Factorization {
    pub fn new(atomset: Arc<AtomSet>, counts: Vec<u32>) -> Result<Self> {
        if counts.len() != atomset.len() {
            return Err(Error::LengthMismatch { expected: atomset.len(), got: counts.len() });
        }
        Ok(Self { atomset, counts })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn atomset(&self) -> &Arc<AtomSet> {
        &self.atomset
    }

    pub fn len(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// π(z): the sequence this factorization multiplies out to.
    pub fn multiply_out(&self) -> Vec<u32> {
        multiply_out(&self.atomset, &self.counts)
    }
}

pub fn multiply_out(atoms: &AtomSet, counts: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; atoms.ground().len()];
    for (a, &c) in atoms.atoms().iter().zip(counts) {
        for (o, &m) in out.iter_mut().zip(a) {
            *o += c * m;
        }
    }
    out
}

/// Factorizations of a residual using atoms from a given index onward.
type Memo = HashMap<(Vec<u32>, usize), Arc<Vec<Vec<u32>>>>;

/// Enumerates factorizations as nondecreasing atom-index sequences, memoized on
/// (residual, smallest allowed atom index). Keep one per atom set to share the
/// memo across many targets.
pub struct Factorizer<'a> {
    atoms: &'a AtomSet,
    memo: Memo,
}

impl<'a> Factorizer<'a> {
    pub fn new(atoms: &'a AtomSet) -> Self {
        Self { atoms, memo: HashMap::new() }
    }

    /// All factorizations of `mult` (as atom-count vectors), sorted.
    /// Returns an empty list when `mult` is not a product of atoms.
    pub fn factor(&mut self, mult: &[u32]) -> Vec<Vec<u32>> {
        let mut out = (*self.go(mult.to_vec(), 0)).clone();
        out.sort();
        out
    }

    fn go(&mut self, residual: Vec<u32>, start: usize) -> Arc<Vec<Vec<u32>>> {
        let k = self.atoms.len();
        if residual.iter().all(|&m| m == 0) {
            return Arc::new(vec![vec![0; k]]);
        }
        let key = (residual, start);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let residual = &key.0;
        // the lowest element still present must be covered by some usable atom
        let pivot = residual.iter().position(|&m| m > 0).unwrap();
        let mut out = Vec::new();
        let usable = self.atoms.containing(pivot).iter().any(|&j| {
            j >= start && self.atoms.atoms()[j].iter().zip(residual).all(|(a, r)| a <= r)
        });
        if usable {
            for j in start..k {
                let atom = &self.atoms.atoms()[j];
                if !atom.iter().zip(residual).all(|(a, r)| a <= r) {
                    continue;
                }
                let rest: Vec<u32> = residual.iter().zip(atom).map(|(r, a)| r - a).collect();
                for tail in self.go(rest, j).iter() {
                    let mut z = tail.clone();
                    z[j] += 1;
                    out.push(z);
                }
            }
        }
        let out = Arc::new(out);
        self.memo.insert(key.clone(), out.clone());
        out
    }
}

fn check_zero_sum(b: &ZSequence, atoms: &AtomSet) -> Result<()> {
    if b.ground() != atoms.ground() {
        return Err(Error::Precondition("sequence and atom set use different ground sets".into()));
    }
    if !b.is_zero_sum()? {
        return Err(Error::NotZeroSum);
    }
    Ok(())
}

/// Z(B), canonically ordered. The empty sequence has the single empty
/// factorization.
pub fn factorizations(b: &ZSequence, atoms: &Arc<AtomSet>) -> Result<Vec<Factorization>> {
    check_zero_sum(b, atoms)?;
    let raw = Factorizer::new(atoms).factor(b.mult());
    Ok(raw.into_iter().map(|counts| Factorization { atomset: atoms.clone(), counts }).collect())
}

/// A set of lengths, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LengthSet(pub BTreeSet<u64>);

impl LengthSet {
    pub fn from_factorizations(raw: &[Vec<u32>]) -> Self {
        LengthSet(raw.iter().map(|z| z.iter().map(|&c| c as u64).sum()).collect())
    }

    pub fn as_vec(&self) -> Vec<u64> {
        self.0.iter().copied().collect()
    }
}

pub fn length_set(b: &ZSequence, atoms: &Arc<AtomSet>) -> Result<LengthSet> {
    check_zero_sum(b, atoms)?;
    Ok(LengthSet::from_factorizations(&Factorizer::new(atoms).factor(b.mult())))
}

/// Successive differences of a set of lengths.
pub fn delta_of(l: &LengthSet) -> BTreeSet<u64> {
    let v = l.as_vec();
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

pub fn raw_distance(z: &[u32], w: &[u32]) -> u64 {
    let (mut left, mut right) = (0u64, 0u64);
    for (&a, &b) in z.iter().zip(w) {
        let common = a.min(b);
        left += (a - common) as u64;
        right += (b - common) as u64;
    }
    left.max(right)
}

/// d(z, z'): cancel the common part, take the longer remainder.
pub fn distance(z: &Factorization, w: &Factorization) -> u64 {
    raw_distance(&z.counts, &w.counts)
}

/// Bottleneck weight of a minimum spanning tree of the complete graph on
/// `facts` under [`raw_distance`]; 0 for at most one factorization.
pub fn catenary_of(facts: &[Vec<u32>]) -> u64 {
    let n = facts.len();
    if n <= 1 {
        return 0;
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![u64::MAX; n];
    best[0] = 0;
    let mut bottleneck = 0;
    for _ in 0..n {
        let u = (0..n).filter(|&i| !in_tree[i]).min_by_key(|&i| best[i]).unwrap();
        in_tree[u] = true;
        bottleneck = bottleneck.max(best[u]);
        for v in 0..n {
            if !in_tree[v] {
                best[v] = best[v].min(raw_distance(&facts[u], &facts[v]));
            }
        }
    }
    bottleneck
}

pub fn catenary_degree(b: &ZSequence, atoms: &Arc<AtomSet>) -> Result<u64> {
    check_zero_sum(b, atoms)?;
    Ok(catenary_of(&Factorizer::new(atoms).factor(b.mult())))
}

/// Worst-case distance from a factorization of one element to the nearest of
/// its factorizations that use atom `u`; `None` if no factorization uses `u`.
pub fn tame_of(facts: &[Vec<u32>], u: usize) -> Option<u64> {
    let through: Vec<&Vec<u32>> = facts.iter().filter(|z| z[u] > 0).collect();
    if through.is_empty() {
        return None;
    }
    facts
        .iter()
        .map(|z| through.iter().map(|w| raw_distance(z, w)).min().unwrap())
        .max()
}

/// Per-element arithmetic report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementReport {
    pub element: Vec<u32>,
    pub lengths: Vec<u64>,
    pub delta: Vec<u64>,
    pub catenary: u64,
    pub num_factorizations: u64,
}

impl ElementReport {
    fn from_factorizations(element: Vec<u32>, facts: &[Vec<u32>]) -> Self {
        let l = LengthSet::from_factorizations(facts);
        Self {
            element,
            delta: delta_of(&l).into_iter().collect(),
            lengths: l.as_vec(),
            catenary: catenary_of(facts),
            num_factorizations: facts.len() as u64,
        }
    }
}

/// Factorizes every nonempty zero-sum sequence of length at most `maxlen`,
/// in parallel with deterministic (lexicographic) output order.
pub fn element_reports(atoms: &AtomSet, maxlen: u64) -> Vec<ElementReport> {
    let seqs: Vec<Vec<u32>> = atoms
        .zero_sum_sequences(maxlen)
        .into_iter()
        .filter(|b| b.iter().any(|&m| m > 0))
        .collect();
    seqs.into_par_iter()
        .map_init(
            || Factorizer::new(atoms),
            |f, b| {
                let facts = f.factor(&b);
                ElementReport::from_factorizations(b, &facts)
            },
        )
        .collect()
}

/// sup of c(B) over zero-sum B with |B| ≤ maxlen.
pub fn catenary_bounded(g0: &GroundSet, maxlen: u64) -> Result<u64> {
    let atoms = atoms_of(g0)?;
    Ok(element_reports(&atoms, maxlen).iter().map(|r| r.catenary).max().unwrap_or(0))
}

/// Bounded local tame degree for atom index `u` of `atoms_of(g0)`.
pub fn tame_bounded(g0: &GroundSet, u: usize, maxlen: u64) -> Result<u64> {
    let atoms = atoms_of(g0)?;
    if u >= atoms.len() {
        return Err(Error::IndexOutOfRange { index: u, len: atoms.len() });
    }
    let seqs = atoms.zero_sum_sequences(maxlen);
    Ok(seqs
        .into_par_iter()
        .map_init(|| Factorizer::new(&atoms), |f, b| tame_of(&f.factor(&b), u).unwrap_or(0))
        .max()
        .unwrap_or(0))
}

/// Union of Δ(L(B)) over zero-sum B with |B| ≤ maxlen.
pub fn delta_bounded(g0: &GroundSet, maxlen: u64) -> Result<BTreeSet<u64>> {
    let atoms = atoms_of(g0)?;
    Ok(element_reports(&atoms, maxlen).into_iter().flat_map(|r| r.delta).collect())
}

/// `{min Δ(G₀') : ∅ ≠ G₀' ⊆ G₀, Δ(G₀') ≠ ∅}` with every Δ bounded by `maxlen`.
///
/// `B(G₀')` is divisor-closed in `B(G₀)`, so the length set of a sequence
/// supported in `G₀'` is the same in both monoids; one sweep over `G₀` serves
/// every subset.
pub fn delta_star_bounded(g0: &GroundSet, maxlen: u64) -> Result<BTreeSet<u64>> {
    let n = g0.len();
    if n > DELTA_STAR_MAX_ELEMENTS {
        return Err(Error::TooManyElements { n, cap: DELTA_STAR_MAX_ELEMENTS });
    }
    let atoms = atoms_of(g0)?;
    let per_support: Vec<(u32, BTreeSet<u64>)> = element_reports(&atoms, maxlen)
        .into_iter()
        .filter(|r| !r.delta.is_empty())
        .map(|r| {
            let mask = r
                .element
                .iter()
                .enumerate()
                .filter(|(_, &m)| m > 0)
                .fold(0u32, |acc, (i, _)| acc | (1 << i));
            (mask, r.delta.into_iter().collect())
        })
        .collect();
    let mut out = BTreeSet::new();
    for subset in 1u32..(1u32 << n) {
        let delta: BTreeSet<u64> = per_support
            .iter()
            .filter(|(mask, _)| mask & !subset == 0)
            .flat_map(|(_, d)| d.iter().copied())
            .collect();
        if let Some(&m) = delta.iter().next() {
            out.insert(m);
        }
    }
    Ok(out)
}

/// Aggregates over a bounded sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAggregate {
    pub delta: Vec<u64>,
    pub catenary: u64,
    pub davenport: u64,
    pub max_factorizations: u64,
    pub all_lengths_singletons: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepReport {
    pub ground: GroundSet,
    pub max_length: u64,
    pub elements: Vec<ElementReport>,
    pub aggregate: SweepAggregate,
}

pub fn sweep(g0: &GroundSet, maxlen: u64) -> Result<SweepReport> {
    let atoms = atoms_of(g0)?;
    let elements = element_reports(&atoms, maxlen);
    let delta: BTreeSet<u64> = elements.iter().flat_map(|r| r.delta.iter().copied()).collect();
    let aggregate = SweepAggregate {
        delta: delta.into_iter().collect(),
        catenary: elements.iter().map(|r| r.catenary).max().unwrap_or(0),
        davenport: atoms.davenport(),
        max_factorizations: elements.iter().map(|r| r.num_factorizations).max().unwrap_or(0),
        all_lengths_singletons: elements.iter().all(|r| r.lengths.len() == 1),
    };
    Ok(SweepReport { ground: g0.clone(), max_length: maxlen, elements, aggregate })
}
