//! Subgroups, membership, quotients and ranks.
//!
//! A subgroup `S ⊆ G = Z^r ⊕ Z/n₁ ⊕ … ⊕ Z/n_k` is represented by its full
//! preimage in `Z^{r+k}`: the generators plus one relation row `nᵢ·e_{r+i}` per
//! torsion factor, reduced to Hermite normal form. Equal subgroups therefore
//! have identical matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::group::{FgGroup, GroupElement, GroupError, Result};
use crate::lattice::{hermite_normal_form, smith_normal_form, solve_in_basis, Row, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupBasis {
    group: FgGroup,
    matrix: Vec<Row>,
}

fn lift(g: &GroupElement) -> Row {
    g.free().iter().chain(g.tors()).map(|&c| BigInt::from(c)).collect()
}

fn relation_rows(group: &FgGroup) -> Vec<Row> {
    let d = group.dim();
    group
        .torsion()
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let mut row = vec![BigInt::zero(); d];
            row[group.rank() + i] = BigInt::from(n);
            row
        })
        .collect()
}

fn big_to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or(GroupError::Overflow)
}

/// Subgroup generated by `gens` (the trivial subgroup for an empty list).
pub fn subgroup_from(group: &FgGroup, gens: &[GroupElement]) -> Result<SubgroupBasis> {
    let mut rows = Vec::with_capacity(gens.len() + group.torsion().len());
    for g in gens {
        group.check(g)?;
        rows.push(lift(g));
    }
    rows.extend(relation_rows(group));
    Ok(SubgroupBasis { group: group.clone(), matrix: hermite_normal_form(&rows, group.dim()) })
}

impl SubgroupBasis {
    pub fn whole(group: &FgGroup) -> Self {
        subgroup_from(group, &group.standard_generators()).expect("standard generators are valid")
    }

    pub fn trivial(group: &FgGroup) -> Self {
        subgroup_from(group, &[]).expect("empty generator list")
    }

    pub fn group(&self) -> &FgGroup {
        &self.group
    }

    /// Normal-form rows in the lifted coordinates.
    pub fn matrix(&self) -> &[Row] {
        &self.matrix
    }

    /// The normal-form rows read back as group elements (some may be zero).
    pub fn generators(&self) -> Result<Vec<GroupElement>> {
        self.matrix
            .iter()
            .map(|row| {
                let flat = row.iter().map(big_to_i64).collect::<Result<Vec<_>>>()?;
                self.group.from_flat(&flat)
            })
            .collect()
    }

    pub fn contains(&self, g: &GroupElement) -> Result<bool> {
        self.group.check(g)?;
        Ok(solve_in_basis(&self.matrix, &lift(g)).is_some())
    }

    pub fn is_subgroup_of(&self, other: &SubgroupBasis) -> bool {
        self.group == other.group
            && self.matrix.iter().all(|row| solve_in_basis(&other.matrix, row).is_some())
    }

    /// Torsion-free rank. The lifted lattice always spans every torsion axis,
    /// so its rank exceeds the free rank by the number of torsion factors.
    pub fn rank(&self) -> usize {
        self.matrix.len() - self.group.torsion().len()
    }
}

pub fn subgroup_contains(s: &SubgroupBasis, g: &GroupElement) -> Result<bool> {
    s.contains(g)
}

pub fn rank_of(s: &SubgroupBasis) -> usize {
    s.rank()
}

/// `S ∩ Z·a`, generated by `d·a` for the least `d ≥ 1` with `d·a ∈ S`
/// (trivial if there is none). Read off the kernel of `[S; a]`.
pub fn intersect_cyclic(s: &SubgroupBasis, a: &GroupElement) -> Result<SubgroupBasis> {
    s.group.check(a)?;
    let d = s.group.dim();
    let k = s.matrix.len() + 1;
    let augmented: Vec<Row> = s
        .matrix
        .iter()
        .chain(std::iter::once(&lift(a)))
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..k).map(|j| if i == j { BigInt::from(1) } else { BigInt::zero() }));
            r
        })
        .collect();
    let h = hermite_normal_form(&augmented, d + k);
    let t = h
        .iter()
        .filter(|row| row[..d].iter().all(Zero::is_zero))
        .fold(BigInt::zero(), |acc, row| acc.gcd(&row[d + k - 1]));
    if t.is_zero() {
        return Ok(SubgroupBasis::trivial(&s.group));
    }
    let t = big_to_i64(&t)?;
    subgroup_from(&s.group, &[s.group.scale(t, a)?])
}

/// `ambient / sub` as a canonical group, with the projection from `ambient`.
#[derive(Debug, Clone)]
pub struct Quotient {
    group: FgGroup,
    ambient: SubgroupBasis,
    smith: SmithForm,
}

impl Quotient {
    pub fn group(&self) -> &FgGroup {
        &self.group
    }

    pub fn ambient(&self) -> &SubgroupBasis {
        &self.ambient
    }

    /// Image of an element of the ambient subgroup in the quotient.
    pub fn project(&self, g: &GroupElement) -> Result<GroupElement> {
        self.ambient.group.check(g)?;
        let coords = solve_in_basis(&self.ambient.matrix, &lift(g)).ok_or(GroupError::NotContained)?;
        let y = self.smith.transform(&coords);
        let t = self.smith.invariants.len();
        let mut tors = Vec::new();
        for (yi, d) in y.iter().zip(&self.smith.invariants) {
            if *d != BigInt::from(1) {
                tors.push(big_to_i64(&yi.mod_floor(d))?);
            }
        }
        let free = y[t..].iter().map(big_to_i64).collect::<Result<Vec<_>>>()?;
        self.group.element(free, tors)
    }
}

/// Computes `ambient / sub` via the Smith normal form of the coordinates of
/// `sub`'s generators in a basis of `ambient`.
pub fn quotient_structure(ambient: &SubgroupBasis, sub: &SubgroupBasis) -> Result<Quotient> {
    if ambient.group != sub.group {
        return Err(GroupError::Mismatch {
            group: ambient.group.to_string(),
            element: format!("subgroup of {}", sub.group),
        });
    }
    let coords = sub
        .matrix
        .iter()
        .map(|row| solve_in_basis(&ambient.matrix, row).ok_or(GroupError::NotContained))
        .collect::<Result<Vec<_>>>()?;
    let m = ambient.matrix.len();
    let smith = smith_normal_form(&coords, m);
    let t = smith.invariants.len();
    let torsion = smith
        .invariants
        .iter()
        .filter(|d| **d != BigInt::from(1))
        .map(big_to_i64)
        .collect::<Result<Vec<_>>>()?;
    let group = FgGroup::new(m - t, torsion)?;
    Ok(Quotient { group, ambient: ambient.clone(), smith })
}

/// Canonical form of `Z^rank ⊕ Z/m₁ ⊕ … ⊕ Z/m_k` for arbitrary moduli `mᵢ ≥ 1`,
/// together with a map sending raw coordinates to canonical elements.
pub struct Canonicalization {
    rank: usize,
    torsion_quotient: Quotient,
    raw_dim: usize,
    group: FgGroup,
}

pub fn canonicalize(rank: usize, moduli: &[i64]) -> Result<Canonicalization> {
    if let Some(&bad) = moduli.iter().find(|&&n| n < 1) {
        return Err(GroupError::InvalidModulus(bad));
    }
    let k = moduli.len();
    let free_k = FgGroup::free(k);
    let relations: Vec<GroupElement> = moduli
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let mut flat = vec![0; k];
            flat[i] = n;
            free_k.from_flat(&flat)
        })
        .collect::<Result<_>>()?;
    let torsion_quotient =
        quotient_structure(&SubgroupBasis::whole(&free_k), &subgroup_from(&free_k, &relations)?)?;
    debug_assert_eq!(torsion_quotient.group.rank(), 0);
    let group = FgGroup::new(rank, torsion_quotient.group.torsion().to_vec())?;
    Ok(Canonicalization { rank, torsion_quotient, raw_dim: rank + k, group })
}

impl Canonicalization {
    pub fn group(&self) -> &FgGroup {
        &self.group
    }

    pub fn map(&self, raw: &[i64]) -> Result<GroupElement> {
        if raw.len() != self.raw_dim {
            return Err(GroupError::Malformed { expected: self.raw_dim, got: raw.len() });
        }
        let (free, tors) = raw.split_at(self.rank);
        let t = self.torsion_quotient.project(&self.torsion_quotient.ambient.group.from_flat(tors)?)?;
        self.group.element(free.to_vec(), t.tors().to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(g: &FgGroup, flat: &[i64]) -> GroupElement {
        g.from_flat(flat).unwrap()
    }

    #[test]
    fn even_sum_subgroup() {
        let z2 = FgGroup::free(2);
        let s = subgroup_from(&z2, &[el(&z2, &[2, 0]), el(&z2, &[1, 1]), el(&z2, &[0, 2])]).unwrap();
        assert!(s.contains(&el(&z2, &[3, 1])).unwrap());
        assert!(!s.contains(&el(&z2, &[1, 0])).unwrap());
        let q = quotient_structure(&SubgroupBasis::whole(&z2), &s).unwrap();
        assert_eq!(q.group(), &FgGroup::cyclic(2).unwrap());
    }

    #[test]
    fn membership_examples() {
        let z2 = FgGroup::free(2);
        let s = subgroup_from(&z2, &[el(&z2, &[2, 0]), el(&z2, &[0, 2])]).unwrap();
        assert!(!s.contains(&el(&z2, &[1, 1])).unwrap());
        assert!(s.contains(&z2.zero()).unwrap());
        let s = subgroup_from(&z2, &[el(&z2, &[2, 0]), el(&z2, &[1, 1])]).unwrap();
        assert!(s.contains(&el(&z2, &[0, 2])).unwrap());
    }

    #[test]
    fn trivial_and_whole() {
        let c2 = FgGroup::cyclic(2).unwrap();
        let t = subgroup_from(&c2, &[]).unwrap();
        assert!(!t.contains(&el(&c2, &[1])).unwrap());
        assert_eq!(subgroup_from(&c2, &[el(&c2, &[1])]).unwrap(), SubgroupBasis::whole(&c2));
        let g = FgGroup::new(1, vec![2, 4]).unwrap();
        let whole = SubgroupBasis::whole(&g);
        assert!(quotient_structure(&whole, &whole).unwrap().group().is_trivial());
    }

    #[test]
    fn cyclic_quotient() {
        let z = FgGroup::free(1);
        let q = quotient_structure(&SubgroupBasis::whole(&z), &subgroup_from(&z, &[el(&z, &[2])]).unwrap())
            .unwrap();
        assert_eq!(q.group(), &FgGroup::cyclic(2).unwrap());
        assert!(q.project(&el(&z, &[4])).unwrap().is_zero());
        assert!(!q.project(&el(&z, &[3])).unwrap().is_zero());
    }

    #[test]
    fn quotient_requires_containment() {
        let z = FgGroup::free(1);
        let two = subgroup_from(&z, &[el(&z, &[2])]).unwrap();
        let whole = SubgroupBasis::whole(&z);
        assert!(matches!(quotient_structure(&two, &whole), Err(GroupError::NotContained)));
    }

    #[test]
    fn ranks() {
        let z2 = FgGroup::free(2);
        assert_eq!(subgroup_from(&z2, &[el(&z2, &[2, 0]), el(&z2, &[0, 3])]).unwrap().rank(), 2);
        assert_eq!(SubgroupBasis::trivial(&z2).rank(), 0);
        assert_eq!(subgroup_from(&z2, &[el(&z2, &[1, 2]), el(&z2, &[2, 4])]).unwrap().rank(), 1);
        let g = FgGroup::new(1, vec![2]).unwrap();
        assert_eq!(subgroup_from(&g, &[el(&g, &[0, 1])]).unwrap().rank(), 0);
        assert_eq!(SubgroupBasis::whole(&g).rank(), 1);
    }

    #[test]
    fn quotient_with_torsion_ambient() {
        // (Z ⊕ Z/4) / ⟨(2|2)⟩
        let g = FgGroup::new(1, vec![4]).unwrap();
        let s = subgroup_from(&g, &[el(&g, &[2, 2])]).unwrap();
        let q = quotient_structure(&SubgroupBasis::whole(&g), &s).unwrap();
        // order of Z⊕Z/4 / ⟨(2,2)⟩: lattice rows (2,2),(0,4) in Z², det 8
        assert_eq!(q.group().order(), Some(8));
        assert!(q.project(&el(&g, &[2, 2])).unwrap().is_zero());
    }

    #[test]
    fn canonicalization_merges_coprime_factors() {
        let c = canonicalize(1, &[2, 3]).unwrap();
        assert_eq!(c.group(), &FgGroup::new(1, vec![6]).unwrap());
        let x = c.map(&[5, 1, 1]).unwrap();
        assert_eq!(x.free(), &[5]);
        assert_eq!(c.group().element_order(&c.group().from_flat(&[0, x.tors()[0]]).unwrap()), Some(6));
        let c = canonicalize(0, &[1, 4]).unwrap();
        assert_eq!(c.group(), &FgGroup::cyclic(4).unwrap());
    }

    #[test]
    fn cyclic_intersections() {
        let z2 = FgGroup::free(2);
        let even = subgroup_from(&z2, &[el(&z2, &[2, 0]), el(&z2, &[0, 2])]).unwrap();
        let i = intersect_cyclic(&even, &el(&z2, &[-1, -3])).unwrap();
        assert_eq!(i, subgroup_from(&z2, &[el(&z2, &[2, 6])]).unwrap());
        let line = subgroup_from(&z2, &[el(&z2, &[1, 0])]).unwrap();
        assert_eq!(intersect_cyclic(&line, &el(&z2, &[1, 1])).unwrap(), SubgroupBasis::trivial(&z2));
        let g = FgGroup::new(1, vec![4]).unwrap();
        let s = subgroup_from(&g, &[el(&g, &[0, 2])]).unwrap();
        // ⟨(0|2)⟩ ∩ Z·(0|1) = ⟨(0|2)⟩
        assert_eq!(intersect_cyclic(&s, &el(&g, &[0, 1])).unwrap(), s);
        assert_eq!(intersect_cyclic(&SubgroupBasis::whole(&z2), &el(&z2, &[-1, -2])).unwrap().rank(), 1);
    }
}
