//! Two explicit families of subsets of `Z^s`.
//!
//! *Split product.* `G₀ = G₁ ∪ G₂` with `G₁` on a line `a_ν = k_ν a₁`
//! (`k_ν ≠ -1`) and every element of `G₂` nonzero with `b₂ = -b₁`. Then
//! `B(G₀) = B(G₁)·B(G₂)`, which at atom level means no atom meets both parts.
//!
//! *Line quotient.* `G₀ = G₁ ∪ {a}` with `G₁ ⊂ N₀²` and `a ∈ (-N)²`. Deleting
//! `a` embeds `B(G₀)` into `F(G₁)` as the kernel of the sum map to
//! `Γ = ⟨G₁⟩ / (⟨G₁⟩ ∩ Z·a)`, and the block homomorphism lands in
//! `B(σ̄(G₁))`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::diophantine::{in_submonoid, SearchLimits};
use crate::error::{Error, Result};
use crate::group::{FgGroup, GroupElement};
use crate::subgroup::{intersect_cyclic, quotient_structure, subgroup_from};
use crate::zerosum::{atoms_of, GroundSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitReport {
    pub holds: bool,
    pub atoms: usize,
    /// Atoms meeting both parts.
    pub crossing: Vec<Vec<u32>>,
}

fn check_split_shape(g0: &GroundSet, in_g1: &[bool]) -> Result<()> {
    let group = g0.group();
    if !group.torsion().is_empty() || group.rank() < 2 {
        return Err(Error::ShapeViolation(format!("expected Z^s with s >= 2, got {group}")));
    }
    let mut direction: Option<&[i64]> = None;
    for (e, &first) in g0.elements().iter().zip(in_g1) {
        let v = e.free();
        if first {
            if v[0] == 0 {
                if !e.is_zero() {
                    return Err(Error::ShapeViolation(format!("{e} has a₁ = 0 but is not zero")));
                }
                continue;
            }
            // k_ν = v_ν / v₁ must be the same rational for every element
            match direction {
                None => {
                    if let Some(nu) = (1..v.len()).find(|&nu| v[nu] == -v[0]) {
                        return Err(Error::ShapeViolation(format!("{e} has k_{} = -1", nu + 1)));
                    }
                    direction = Some(v);
                }
                Some(d) => {
                    let off = (1..v.len()).any(|nu| v[nu] as i128 * d[0] as i128 != d[nu] as i128 * v[0] as i128);
                    if off {
                        return Err(Error::ShapeViolation(format!("{e} is off the line of G₁")));
                    }
                }
            }
        } else if e.is_zero() || v[1] != -v[0] {
            return Err(Error::ShapeViolation(format!("{e} is zero or has b₂ ≠ -b₁")));
        }
    }
    Ok(())
}

/// Whether every atom of `B(G₀)` lies wholly in `G₁` (the indices in `g1`) or
/// wholly in its complement.
pub fn check_split_product(g0: &GroundSet, g1: &[usize]) -> Result<SplitReport> {
    let mut in_g1 = vec![false; g0.len()];
    for &i in g1 {
        if i >= g0.len() {
            return Err(Error::IndexOutOfRange { index: i, len: g0.len() });
        }
        in_g1[i] = true;
    }
    check_split_shape(g0, &in_g1)?;
    let atoms = atoms_of(g0)?;
    let crossing: Vec<Vec<u32>> = atoms
        .atoms()
        .iter()
        .filter(|a| {
            let mut parts = a.iter().zip(&in_g1).filter(|(m, _)| **m > 0).map(|(_, p)| *p);
            let first = parts.next();
            parts.any(|p| Some(p) != first)
        })
        .cloned()
        .collect();
    Ok(SplitReport { holds: crossing.is_empty(), atoms: atoms.len(), crossing })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineQuotientReport {
    pub gamma: FgGroup,
    /// `σ̄(G₁)` as coordinates in `Γ`, sorted and deduplicated.
    pub images: Vec<Vec<i64>>,
    /// The images as integers when `Γ ≅ Z`, oriented to agree in sign with
    /// `x ↦ det(a, x)`.
    pub integer_images: Option<Vec<i64>>,
    /// Minimal generators of `[G₁]`, used for the condensedness check.
    pub generators: Vec<Vec<i64>>,
    /// Whether `[G₁ ∪ {a}] = ⟨G₁ ∪ {a}⟩`.
    pub condensed: bool,
}

impl LineQuotientReport {
    pub fn target(&self) -> Result<GroundSet> {
        let els: Vec<&[i64]> = self.images.iter().map(Vec::as_slice).collect();
        GroundSet::from_flat(self.gamma.clone(), &els)
    }
}

/// Drops every element lying in the submonoid generated by the smaller ones
/// (ordered by coordinate sum, then lexicographically).
pub fn minimal_generators(group: &FgGroup, elements: &[GroupElement]) -> Result<Vec<GroupElement>> {
    let mut sorted = elements.to_vec();
    sorted.sort_by_key(|e| (e.free().iter().sum::<i64>(), e.free().to_vec()));
    sorted.dedup();
    let mut kept: Vec<GroupElement> = Vec::new();
    for e in sorted {
        if !in_submonoid(group, &e, &kept, SearchLimits::default())? {
            kept.push(e);
        }
    }
    Ok(kept)
}

pub fn line_quotient_transfer(g1: &[GroupElement], a: &GroupElement) -> Result<LineQuotientReport> {
    let z2 = FgGroup::free(2);
    z2.check(a)?;
    if a.free()[0] >= 0 || a.free()[1] >= 0 {
        return Err(Error::Precondition(format!("{a} must have both coordinates negative")));
    }
    for g in g1 {
        z2.check(g)?;
        if g.free().iter().any(|&c| c < 0) {
            return Err(Error::Precondition(format!("{g} is not in N₀²")));
        }
    }
    let span = subgroup_from(&z2, g1)?;
    let quotient = quotient_structure(&span, &intersect_cyclic(&span, a)?)?;
    let gamma = quotient.group().clone();
    let mut images = g1.iter().map(|g| quotient.project(g)).collect::<Result<Vec<_>, _>>()?;
    images.sort();
    images.dedup();

    let integer_images = if gamma == FgGroup::free(1) {
        // det(a, ·) vanishes on Z·a, so on ⟨G₁⟩ it is a multiple of the projection
        let (a1, a2) = (a.free()[0], a.free()[1]);
        let mut sign = 1;
        for b in span.generators()? {
            let p = quotient.project(&b)?.free()[0];
            let det = a1 * b.free()[1] - a2 * b.free()[0];
            if p != 0 {
                sign = if det.signum() * p.signum() < 0 { -1 } else { 1 };
                break;
            }
        }
        let set: BTreeSet<i64> = images.iter().map(|p| sign * p.free()[0]).collect();
        Some(set.into_iter().collect())
    } else {
        None
    };

    let generators = minimal_generators(&z2, g1)?;
    let mut monoid_gens = generators.clone();
    monoid_gens.push(a.clone());
    let mut condensed = true;
    for g in &monoid_gens {
        if !in_submonoid(&z2, &z2.neg(g)?, &monoid_gens, SearchLimits::default())? {
            condensed = false;
            break;
        }
    }
    Ok(LineQuotientReport {
        gamma,
        images: images.iter().map(GroupElement::to_flat).collect(),
        integer_images,
        generators: generators.iter().map(GroupElement::to_flat).collect(),
        condensed,
    })
}

/// `{(m, n) ∈ [0, N]² : n ≥ m²}`.
pub fn parabola_family(n: i64) -> Vec<GroupElement> {
    let z2 = FgGroup::free(2);
    (0..=n)
        .flat_map(|m| (m * m..=n).map(move |k| (m, k)))
        .map(|(m, k)| z2.from_flat(&[m, k]).expect("rank 2"))
        .collect()
}

/// `[0, N]²`.
pub fn square_family(n: i64) -> Vec<GroupElement> {
    let z2 = FgGroup::free(2);
    (0..=n)
        .flat_map(|m| (0..=n).map(move |k| (m, k)))
        .map(|(m, k)| z2.from_flat(&[m, k]).expect("rank 2"))
        .collect()
}
