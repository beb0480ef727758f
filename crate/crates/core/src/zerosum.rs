//! The monoid `B(G₀)` of zero-sum sequences over a finite ground set.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::diophantine::{minimal_solutions, DiophSystem, SearchLimits};
use crate::error::{Error, Result};
use crate::group::{FgGroup, GroupElement};
use crate::subgroup::canonicalize;

/// A finite ordered set of distinct elements of one group. Element order is
/// part of the identity: indices are stable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawGroundSet")]
pub struct GroundSet {
    group: FgGroup,
    elements: Vec<GroupElement>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    rank: usize,
    #[serde(default)]
    torsion: Vec<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroundSet {
    group: RawGroup,
    elements: Vec<Vec<i64>>,
}

impl TryFrom<RawGroundSet> for GroundSet {
    type Error = Error;

    fn try_from(raw: RawGroundSet) -> Result<Self> {
        // arbitrary moduli are accepted and mapped into invariant-factor form
        let canon = canonicalize(raw.group.rank, &raw.group.torsion)?;
        let elements = raw
            .elements
            .iter()
            .map(|e| canon.map(e))
            .collect::<Result<Vec<_>, _>>()?;
        GroundSet::new(canon.group().clone(), elements)
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let els: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}} ⊂ {}", els.join(", "), self.group)
    }
}

impl GroundSet {
    pub fn new(group: FgGroup, elements: Vec<GroupElement>) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in &elements {
            group.check(e)?;
            if !seen.insert(e) {
                return Err(Error::DuplicateElement(e.to_string()));
            }
        }
        Ok(Self { group, elements })
    }

    /// Convenience constructor from flat coordinates.
    pub fn from_flat(group: FgGroup, elements: &[&[i64]]) -> Result<Self> {
        let els = elements
            .iter()
            .map(|e| group.from_flat(e))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(group, els)
    }

    pub fn group(&self) -> &FgGroup {
        &self.group
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.elements.iter().position(|e| e == g)
    }

    /// The ground set restricted to `indices` (in the given order).
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        let els = indices
            .iter()
            .map(|&i| {
                self.elements
                    .get(i)
                    .cloned()
                    .ok_or(Error::IndexOutOfRange { index: i, len: self.len() })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.group.clone(), els)
    }

    /// Compact JSON used as the content key of caches.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("ground sets always serialize")
    }

    pub fn sum(&self, mult: &[u32]) -> Result<GroupElement> {
        if mult.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: mult.len() });
        }
        Ok(self.group.linear_combination(mult, &self.elements)?)
    }
}

/// A sequence over a ground set, stored as its multiplicity vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZSequence {
    ground: Arc<GroundSet>,
    mult: Vec<u32>,
}

impl ZSequence {
    pub fn new(ground: Arc<GroundSet>, mult: Vec<u32>) -> Result<Self> {
        if mult.len() != ground.len() {
            return Err(Error::LengthMismatch { expected: ground.len(), got: mult.len() });
        }
        Ok(Self { ground, mult })
    }

    pub fn empty(ground: Arc<GroundSet>) -> Self {
        let n = ground.len();
        Self { ground, mult: vec![0; n] }
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn mult(&self) -> &[u32] {
        &self.mult
    }

    pub fn len(&self) -> u64 {
        self.mult.iter().map(|&m| m as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.mult.len()).filter(|&i| self.mult[i] > 0).collect()
    }

    pub fn divides(&self, other: &ZSequence) -> bool {
        self.mult.iter().zip(&other.mult).all(|(a, b)| a <= b)
    }

    pub fn product(&self, other: &ZSequence) -> Result<ZSequence> {
        if self.ground != other.ground {
            return Err(Error::LengthMismatch { expected: self.mult.len(), got: other.mult.len() });
        }
        let mult = self.mult.iter().zip(&other.mult).map(|(a, b)| a + b).collect();
        Ok(ZSequence { ground: self.ground.clone(), mult })
    }

    pub fn sum(&self) -> Result<GroupElement> {
        self.ground.sum(&self.mult)
    }

    pub fn is_zero_sum(&self) -> Result<bool> {
        Ok(self.sum()?.is_zero())
    }
}

/// σ(S).
pub fn seq_sum(s: &ZSequence) -> Result<GroupElement> {
    s.sum()
}

/// The atoms of `B(G₀)`, sorted lexicographically by multiplicity vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomSet {
    ground: Arc<GroundSet>,
    atoms: Vec<Vec<u32>>,
    containing: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomSetJson {
    ground: GroundSet,
    atoms: Vec<Vec<u32>>,
}

impl Serialize for AtomSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AtomSetJson { ground: (*self.ground).clone(), atoms: self.atoms.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AtomSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = AtomSetJson::deserialize(d)?;
        AtomSet::from_parts(Arc::new(raw.ground), raw.atoms).map_err(serde::de::Error::custom)
    }
}

impl AtomSet {
    /// Builds an atom set from stored vectors, re-checking that every vector is
    /// a nonempty zero-sum sequence and that the list is sorted and
    /// duplicate-free. Minimality is not re-proved here.
    pub fn from_parts(ground: Arc<GroundSet>, atoms: Vec<Vec<u32>>) -> Result<Self> {
        for a in &atoms {
            if a.iter().all(|&m| m == 0) || !ground.sum(a)?.is_zero() {
                return Err(Error::NotZeroSum);
            }
        }
        if atoms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition("atoms must be sorted and distinct".into()));
        }
        let mut containing = vec![Vec::new(); ground.len()];
        for (j, a) in atoms.iter().enumerate() {
            for (i, &m) in a.iter().enumerate() {
                if m > 0 {
                    containing[i].push(j);
                }
            }
        }
        Ok(Self { ground, atoms, containing })
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn atoms(&self) -> &[Vec<u32>] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom(&self, j: usize) -> ZSequence {
        ZSequence { ground: self.ground.clone(), mult: self.atoms[j].clone() }
    }

    /// Indices of the atoms whose support contains element `i`.
    pub fn containing(&self, i: usize) -> &[usize] {
        &self.containing[i]
    }

    pub fn exponent(&self, i: usize) -> Result<Exponent> {
        if i >= self.ground.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.ground.len() });
        }
        let vals: Vec<u64> = self.containing[i].iter().map(|&j| self.atoms[j][i] as u64).collect();
        let min = *vals.iter().min().ok_or(Error::UndefinedExponent { index: i })?;
        let gcd = vals.iter().fold(0u64, |g, &v| num_integer::gcd(g, v));
        Ok(Exponent { gcd, min })
    }

    pub fn davenport(&self) -> u64 {
        self.atoms.iter().map(|a| a.iter().map(|&m| m as u64).sum()).max().unwrap_or(0)
    }

    /// Every zero-sum sequence of length at most `maxlen` (the empty one
    /// included), in lexicographic order. Built as sums of atoms.
    pub fn zero_sum_sequences(&self, maxlen: u64) -> Vec<Vec<u32>> {
        let n = self.ground.len();
        let lens: Vec<u64> = self.atoms.iter().map(|a| a.iter().map(|&m| m as u64).sum()).collect();
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let empty = vec![0u32; n];
        seen.insert(empty.clone());
        let mut frontier = vec![(empty, 0u64)];
        while let Some((v, len)) = frontier.pop() {
            for (a, &l) in self.atoms.iter().zip(&lens) {
                if len + l > maxlen {
                    continue;
                }
                let w: Vec<u32> = v.iter().zip(a).map(|(x, y)| x + y).collect();
                if seen.insert(w.clone()) {
                    frontier.push((w, len + l));
                }
            }
        }
        let mut out: Vec<Vec<u32>> = seen.into_iter().collect();
        out.sort();
        out
    }
}

/// `gcd` and `min` of `v_g` over the atoms containing `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exponent {
    pub gcd: u64,
    pub min: u64,
}

type Memo = Mutex<HashMap<GroundSet, Arc<AtomSet>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Makes a precomputed atom set (e.g. read from a cache) visible to
/// [`atoms_of`].
pub fn remember_atoms(atoms: Arc<AtomSet>) {
    memo().lock().unwrap().insert((*atoms.ground).clone(), atoms);
}

/// Empties the in-process memo, forcing later lookups to recompute.
pub fn forget_atoms() {
    memo().lock().unwrap().clear();
}

/// `A(B(G₀))` with the default search budget, memoized per ground set.
pub fn atoms_of(g0: &GroundSet) -> Result<Arc<AtomSet>> {
    atoms_with_limits(g0, SearchLimits::default())
}

pub fn atoms_with_limits(g0: &GroundSet, limits: SearchLimits) -> Result<Arc<AtomSet>> {
    if let Some(hit) = memo().lock().unwrap().get(g0) {
        return Ok(hit.clone());
    }
    // computed outside the lock; a concurrent duplicate yields the same value
    let sys = DiophSystem::new(g0.group().clone(), g0.elements().to_vec())?;
    let sols = minimal_solutions(&sys, limits)?;
    let atoms = Arc::new(AtomSet::from_parts(Arc::new(g0.clone()), sols.solutions)?);
    memo().lock().unwrap().insert(g0.clone(), atoms.clone());
    Ok(atoms)
}

pub fn is_condensed(g0: &GroundSet) -> Result<bool> {
    let atoms = atoms_of(g0)?;
    Ok((0..g0.len()).all(|i| !atoms.containing(i).is_empty()))
}

/// Drops the elements that occur in no atom. Returns the condensed ground set
/// and, for each of its elements, the index it had in `g0`.
pub fn condense(g0: &GroundSet) -> Result<(GroundSet, Vec<usize>)> {
    let atoms = atoms_of(g0)?;
    let kept: Vec<usize> = (0..g0.len()).filter(|&i| !atoms.containing(i).is_empty()).collect();
    Ok((g0.restrict(&kept)?, kept))
}

pub fn exponent_e(g0: &GroundSet, g: usize) -> Result<Exponent> {
    atoms_of(g0)?.exponent(g)
}

pub fn davenport(g0: &GroundSet) -> Result<u64> {
    Ok(atoms_of(g0)?.davenport())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> FgGroup {
        FgGroup::cyclic(n).unwrap()
    }

    fn atoms(g0: &GroundSet) -> Vec<Vec<u32>> {
        atoms_of(g0).unwrap().atoms().to_vec()
    }

    #[test]
    fn sums() {
        let z = FgGroup::free(1);
        let g0 = Arc::new(GroundSet::from_flat(z, &[&[1], &[-2]]).unwrap());
        assert!(ZSequence::new(g0.clone(), vec![2, 1]).unwrap().sum().unwrap().is_zero());
        assert!(ZSequence::empty(g0).sum().unwrap().is_zero());
        let g0 = Arc::new(GroundSet::from_flat(c(3), &[&[1], &[2]]).unwrap());
        assert!(seq_sum(&ZSequence::new(g0, vec![1, 1]).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn atom_examples() {
        let g0 = GroundSet::from_flat(c(3), &[&[1], &[2]]).unwrap();
        assert_eq!(atoms(&g0), vec![vec![0, 3], vec![1, 1], vec![3, 0]]);
        let g0 = GroundSet::from_flat(FgGroup::free(1), &[&[1], &[-2]]).unwrap();
        assert_eq!(atoms(&g0), vec![vec![2, 1]]);
        let g0 = GroundSet::from_flat(c(5), &[&[0]]).unwrap();
        assert_eq!(atoms(&g0), vec![vec![1]]);
        let g0 = GroundSet::from_flat(c(4), &[&[1], &[2]]).unwrap();
        assert_eq!(atoms(&g0), vec![vec![0, 2], vec![2, 1], vec![4, 0]]);
    }

    #[test]
    fn condensed_examples() {
        let z = FgGroup::free(1);
        let one = GroundSet::from_flat(z.clone(), &[&[1]]).unwrap();
        assert!(!is_condensed(&one).unwrap());
        assert!(condense(&one).unwrap().0.is_empty());
        let sym = GroundSet::from_flat(z, &[&[-2], &[-1], &[0], &[1], &[2]]).unwrap();
        assert!(is_condensed(&sym).unwrap());
        assert!(is_condensed(&GroundSet::from_flat(c(4), &[&[1], &[2]]).unwrap()).unwrap());
    }

    #[test]
    fn condense_keeps_original_indices() {
        let z = FgGroup::free(1);
        let g0 = GroundSet::from_flat(z, &[&[3], &[1], &[-1]]).unwrap();
        let (c, kept) = condense(&g0).unwrap();
        assert_eq!(kept, vec![0, 1, 2]);
        assert_eq!(c, g0);
        let g0 = GroundSet::from_flat(FgGroup::free(2), &[&[1, 0], &[0, 1], &[-1, 0]]).unwrap();
        let (c, kept) = condense(&g0).unwrap();
        assert_eq!(kept, vec![0, 2]);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn exponent_examples() {
        let g0 = GroundSet::from_flat(c(4), &[&[1], &[2]]).unwrap();
        assert_eq!(exponent_e(&g0, 0).unwrap(), Exponent { gcd: 2, min: 2 });
        let g0 = GroundSet::from_flat(c(7), &[&[0]]).unwrap();
        assert_eq!(exponent_e(&g0, 0).unwrap(), Exponent { gcd: 1, min: 1 });
        let g0 = GroundSet::from_flat(FgGroup::free(2), &[&[1, 0], &[-2, 0], &[-3, 0]]).unwrap();
        assert_eq!(exponent_e(&g0, 0).unwrap(), Exponent { gcd: 1, min: 2 });
        let g0 = GroundSet::from_flat(FgGroup::free(1), &[&[1]]).unwrap();
        assert!(matches!(exponent_e(&g0, 0), Err(Error::UndefinedExponent { index: 0 })));
    }

    #[test]
    fn davenport_examples() {
        assert_eq!(davenport(&GroundSet::from_flat(c(3), &[&[1], &[2]]).unwrap()).unwrap(), 3);
        assert_eq!(davenport(&GroundSet::from_flat(c(3), &[&[0]]).unwrap()).unwrap(), 1);
        assert_eq!(davenport(&GroundSet::from_flat(c(4), &[&[1]]).unwrap()).unwrap(), 4);
        assert_eq!(davenport(&GroundSet::new(c(4), vec![]).unwrap()).unwrap(), 0);
    }

    #[test]
    fn duplicates_rejected() {
        assert!(matches!(
            GroundSet::from_flat(c(4), &[&[1], &[5]]),
            Err(Error::DuplicateElement(_))
        ));
    }

    #[test]
    fn json_canonicalizes_torsion() {
        let g0: GroundSet =
            serde_json::from_str(r#"{"group": {"rank": 0, "torsion": [2, 3]}, "elements": [[1, 0], [0, 1]]}"#)
                .unwrap();
        assert_eq!(g0.group(), &c(6));
        let orders: Vec<_> = g0.elements().iter().map(|e| g0.group().element_order(e)).collect();
        assert_eq!(orders, vec![Some(2), Some(3)]);
        let back: GroundSet = serde_json::from_str(&g0.canonical_json()).unwrap();
        assert_eq!(back, g0);
    }

    #[test]
    fn zero_sum_enumeration_matches_filter() {
        let g0 = GroundSet::from_flat(c(4), &[&[1], &[2], &[3]]).unwrap();
        let a = atoms_of(&g0).unwrap();
        let got = a.zero_sum_sequences(6);
        let mut want = Vec::new();
        for x in 0..=6u32 {
            for y in 0..=6 - x {
                for z in 0..=6 - x - y {
                    if (x + 2 * y + 3 * z) % 4 == 0 {
                        want.push(vec![x, y, z]);
                    }
                }
            }
        }
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn atom_json_round_trip() {
        let g0 = GroundSet::from_flat(c(3), &[&[1], &[2]]).unwrap();
        let a = atoms_of(&g0).unwrap();
        let text = serde_json::to_string(&*a).unwrap();
        assert_eq!(
            text,
            r#"{"ground":{"group":{"rank":0,"torsion":[3]},"elements":[[1],[2]]},"atoms":[[0,3],[1,1],[3,0]]}"#
        );
        let back: AtomSet = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, &*a);
        let bad = r#"{"ground":{"group":{"rank":0,"torsion":[3]},"elements":[[1],[2]]},"atoms":[[1,0]]}"#;
        assert!(serde_json::from_str::<AtomSet>(bad).is_err());
    }
}
