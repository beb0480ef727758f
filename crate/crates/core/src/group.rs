//! Finitely generated abelian groups `Z^r ⊕ Z/n₁ ⊕ … ⊕ Z/n_k` and their elements.
//!
//! Torsion moduli are always held in invariant-factor form (`n₁ | n₂ | … | n_k`,
//! every `nᵢ ≥ 2`), so two groups are equal exactly when their ranks and moduli
//! lists agree. Element coordinates are machine integers with checked
//! arithmetic; the lattice routines in [`crate::lattice`] work over `BigInt`.

use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("element {element} does not belong to group {group}")]
    Mismatch { group: String, element: String },
    #[error("torsion modulus {0} must be at least 2")]
    InvalidModulus(i64),
    #[error("torsion moduli {0:?} are not in invariant-factor form")]
    NonCanonical(Vec<i64>),
    #[error("integer overflow in group arithmetic")]
    Overflow,
    #[error("subgroup is not contained in the ambient subgroup")]
    NotContained,
    #[error("malformed element encoding: expected {expected} coordinates, got {got}")]
    Malformed { expected: usize, got: usize },
}

pub type Result<T, E = GroupError> = std::result::Result<T, E>;

/// A finitely generated abelian group in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawGroup")]
pub struct FgGroup {
    rank: usize,
    torsion: Vec<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    rank: usize,
    #[serde(default)]
    torsion: Vec<i64>,
}

impl TryFrom<RawGroup> for FgGroup {
    type Error = GroupError;

    fn try_from(raw: RawGroup) -> Result<Self> {
        FgGroup::new(raw.rank, raw.torsion)
    }
}

/// An element of an [`FgGroup`]: free coordinates followed by torsion
/// coordinates, the latter reduced into `[0, nᵢ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    free: Vec<i64>,
    tors: Vec<i64>,
}

impl GroupElement {
    pub fn free(&self) -> &[i64] {
        &self.free
    }

    pub fn tors(&self) -> &[i64] {
        &self.tors
    }

    /// Flat encoding, free coordinates first.
    pub fn to_flat(&self) -> Vec<i64> {
        self.free.iter().chain(&self.tors).copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.tors).all(|&c| c == 0)
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.free.len() + self.tors.len()))?;
        for c in self.free.iter().chain(&self.tors) {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let free: Vec<String> = self.free.iter().map(|c| c.to_string()).collect();
        let tors: Vec<String> = self.tors.iter().map(|c| c.to_string()).collect();
        match (free.is_empty(), tors.is_empty()) {
            (_, true) => write!(f, "({})", free.join(",")),
            (true, false) => write!(f, "({})", tors.join(",")),
            (false, false) => write!(f, "({} | {})", free.join(","), tors.join(",")),
        }
    }
}

impl fmt::Display for FgGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|n| format!("Z/{n}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl FgGroup {
    /// Builds a group from moduli that are already in invariant-factor form.
    /// Use [`crate::subgroup::canonicalize`] for arbitrary moduli.
    pub fn new(rank: usize, torsion: Vec<i64>) -> Result<Self> {
        if let Some(&bad) = torsion.iter().find(|&&n| n < 2) {
            return Err(GroupError::InvalidModulus(bad));
        }
        if torsion.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(GroupError::NonCanonical(torsion));
        }
        Ok(Self { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        Self { rank, torsion: Vec::new() }
    }

    pub fn cyclic(n: i64) -> Result<Self> {
        Self::new(0, vec![n])
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    /// Number of coordinates in the flat element encoding.
    pub fn dim(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Group order, or `None` when the group is infinite.
    pub fn order(&self) -> Option<u128> {
        if self.rank > 0 {
            return None;
        }
        self.torsion
            .iter()
            .try_fold(1u128, |acc, &n| acc.checked_mul(n as u128))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { free: vec![0; self.rank], tors: vec![0; self.torsion.len()] }
    }

    /// Builds an element, reducing torsion coordinates.
    pub fn element(&self, free: Vec<i64>, tors: Vec<i64>) -> Result<GroupElement> {
        if free.len() != self.rank || tors.len() != self.torsion.len() {
            return Err(GroupError::Malformed {
                expected: self.dim(),
                got: free.len() + tors.len(),
            });
        }
        let tors = tors
            .iter()
            .zip(&self.torsion)
            .map(|(&c, &n)| c.rem_euclid(n))
            .collect();
        Ok(GroupElement { free, tors })
    }

    pub fn from_flat(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.dim() {
            return Err(GroupError::Malformed { expected: self.dim(), got: coords.len() });
        }
        let (free, tors) = coords.split_at(self.rank);
        self.element(free.to_vec(), tors.to_vec())
    }

    /// Standard generators: unit vectors of the free part, then one generator
    /// per cyclic torsion factor.
    pub fn standard_generators(&self) -> Vec<GroupElement> {
        (0..self.dim())
            .map(|i| {
                let mut flat = vec![0; self.dim()];
                flat[i] = 1;
                self.from_flat(&flat).expect("unit vector has the right shape")
            })
            .collect()
    }

    /// Checks that `g` is a well-formed element of this group.
    pub fn check(&self, g: &GroupElement) -> Result<()> {
        let shape_ok = g.free.len() == self.rank && g.tors.len() == self.torsion.len();
        let reduced = g.tors.iter().zip(&self.torsion).all(|(&c, &n)| (0..n).contains(&c));
        if shape_ok && reduced {
            Ok(())
        } else {
            Err(GroupError::Mismatch { group: self.to_string(), element: g.to_string() })
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        let free = a
            .free
            .iter()
            .zip(&b.free)
            .map(|(x, y)| x.checked_add(*y).ok_or(GroupError::Overflow))
            .collect::<Result<Vec<_>>>()?;
        let tors = a
            .tors
            .iter()
            .zip(&b.tors)
            .zip(&self.torsion)
            .map(|((x, y), n)| (x + y) % n)
            .collect();
        Ok(GroupElement { free, tors })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.scale(-1, a)
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.add(a, &self.neg(b)?)
    }

    /// `n·g`, negative `n` allowed.
    pub fn scale(&self, n: i64, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        let free = g
            .free
            .iter()
            .map(|x| x.checked_mul(n).ok_or(GroupError::Overflow))
            .collect::<Result<Vec<_>>>()?;
        let tors = g
            .tors
            .iter()
            .zip(&self.torsion)
            .map(|(&x, &m)| ((x as i128 * n as i128).rem_euclid(m as i128)) as i64)
            .collect();
        Ok(GroupElement { free, tors })
    }

    /// `Σ countsᵢ·elementsᵢ`.
    pub fn linear_combination(&self, counts: &[u32], elements: &[GroupElement]) -> Result<GroupElement> {
        let mut acc = self.zero();
        for (&c, g) in counts.iter().zip(elements) {
            if c != 0 {
                acc = self.add(&acc, &self.scale(c as i64, g)?)?;
            }
        }
        Ok(acc)
    }

    /// Additive order of `g`, `None` if infinite.
    pub fn element_order(&self, g: &GroupElement) -> Option<i64> {
        if g.free.iter().any(|&c| c != 0) {
            return None;
        }
        Some(g.tors.iter().zip(&self.torsion).fold(1i64, |acc, (&c, &n)| {
            let o = n / num_integer::gcd(c, n);
            num_integer::lcm(acc, o)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_z3() -> FgGroup {
        FgGroup::new(1, vec![3]).unwrap()
    }

    #[test]
    fn add_reduces_torsion() {
        let g = z_z3();
        let a = g.element(vec![1], vec![2]).unwrap();
        let b = g.element(vec![2], vec![2]).unwrap();
        assert_eq!(g.add(&a, &b).unwrap(), g.element(vec![3], vec![1]).unwrap());
        assert_eq!(g.add(&a, &g.zero()).unwrap(), a);

        let c4 = FgGroup::cyclic(4).unwrap();
        let two = c4.from_flat(&[2]).unwrap();
        assert!(c4.add(&two, &two).unwrap().is_zero());
    }

    #[test]
    fn scale_examples() {
        let c4 = FgGroup::cyclic(4).unwrap();
        let one = c4.from_flat(&[1]).unwrap();
        assert_eq!(c4.scale(2, &one).unwrap(), c4.from_flat(&[2]).unwrap());
        assert!(c4.scale(0, &one).unwrap().is_zero());
        let g = z_z3();
        let x = g.element(vec![1], vec![1]).unwrap();
        assert_eq!(g.scale(-1, &x).unwrap(), g.element(vec![-1], vec![2]).unwrap());
        assert_eq!(g.scale(1, &x).unwrap(), x);
    }

    #[test]
    fn mismatch_is_an_error() {
        let g = z_z3();
        let other = FgGroup::free(2).from_flat(&[1, 1]).unwrap();
        assert!(matches!(g.add(&g.zero(), &other), Err(GroupError::Mismatch { .. })));
        let unreduced = GroupElement { free: vec![0], tors: vec![5] };
        assert!(g.check(&unreduced).is_err());
    }

    #[test]
    fn construction_rejects_bad_moduli() {
        assert_eq!(FgGroup::new(0, vec![1]), Err(GroupError::InvalidModulus(1)));
        assert_eq!(FgGroup::new(0, vec![2, 3]), Err(GroupError::NonCanonical(vec![2, 3])));
        assert!(FgGroup::new(0, vec![2, 4]).is_ok());
    }

    #[test]
    fn overflow_is_reported() {
        let z = FgGroup::free(1);
        let big = z.from_flat(&[i64::MAX]).unwrap();
        assert_eq!(z.add(&big, &big), Err(GroupError::Overflow));
    }

    #[test]
    fn json_encoding() {
        let g: FgGroup = serde_json::from_str(r#"{"rank": 1, "torsion": [2]}"#).unwrap();
        assert_eq!(g, FgGroup::new(1, vec![2]).unwrap());
        let e = g.from_flat(&[-3, 1]).unwrap();
        assert_eq!(serde_json::to_string(&e).unwrap(), "[-3,1]");
        assert!(serde_json::from_str::<FgGroup>(r#"{"rank": 0, "torsion": [2], "x": 1}"#).is_err());
    }

    #[test]
    fn element_order() {
        let g = FgGroup::new(0, vec![2, 4]).unwrap();
        assert_eq!(g.element_order(&g.from_flat(&[1, 2]).unwrap()), Some(2));
        assert_eq!(g.element_order(&g.from_flat(&[1, 1]).unwrap()), Some(4));
        assert_eq!(g.element_order(&g.zero()), Some(1));
    }
}
