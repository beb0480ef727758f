//! Divisor theories of `B(G₀)` computed from its atoms, block homomorphisms,
//! and their iteration until the inclusion `B(G₀*) ↪ F(G₀*)` is a divisor
//! theory.
//!
//! For `H = B(G₀) ⊆ F(G₀)` with `G₀` condensed, the height-one primes of `H`
//! are the minimal ones among `q_g = {B ∈ H : g | B}`. Since every zero-sum
//! sequence containing `g` contains an atom containing `g`, the order
//! `q_g ⊆ q_h` can be read off the atoms, and so can the ramification
//! `e(q) = gcd v_{f(q)}(H)` of a chosen representative `f(q)`. The divisor
//! theory is `∂(B) = (v_{f(q)}(B) / e(q))_q`, its class group is
//! `Z^{#q} / ⟨∂(atoms)⟩`, and the block homomorphism sends `B` to the sequence
//! over the classes of the basis vectors with multiplicities `∂(B)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diophantine::{in_submonoid, SearchLimits};
use crate::error::{Error, Result};
use crate::factorization::{catenary_of, Factorizer, LengthSet};
use crate::group::{FgGroup, GroupElement};
use crate::subgroup::{quotient_structure, subgroup_from, SubgroupBasis};
use crate::zerosum::{atoms_of, condense, AtomSet, Exponent, GroundSet, ZSequence};

pub const DEFAULT_MAX_STEPS: usize = 32;

/// Support classes of a condensed ground set and the minimal ones among them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeClassification {
    /// Element indices per class, each sorted; classes ordered by first index.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// `contained[a][b]` iff `q_a ⊆ q_b`.
    pub contained: Vec<Vec<bool>>,
    /// Ids of the minimal classes, ascending.
    pub minimal: Vec<usize>,
    /// Representative (lowest index) per minimal class.
    pub reps: Vec<usize>,
    /// Exponent of the representative per minimal class.
    pub e: Vec<Exponent>,
    /// Exponent of every element, minimal or not.
    pub element_exponents: Vec<Exponent>,
}

impl PrimeClassification {
    pub fn is_minimal_class(&self, class: usize) -> bool {
        self.minimal.binary_search(&class).is_ok()
    }

    /// Every class a minimal singleton with exponent one. On a condensed
    /// ground set this holds iff the inclusion into the free monoid is already
    /// a divisor theory.
    pub fn is_trivial(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
            && self.minimal.len() == self.classes.len()
            && self.e.iter().all(|x| x.gcd == 1)
    }
}

pub fn classify_primes(atoms: &AtomSet) -> Result<PrimeClassification> {
    let n = atoms.ground().len();
    if let Some(index) = (0..n).find(|&i| atoms.containing(i).is_empty()) {
        return Err(Error::NotCondensed { index });
    }
    let mut by_support: BTreeMap<&[usize], Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        by_support.entry(atoms.containing(i)).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = by_support.into_values().collect();
    classes.sort_by_key(|c| c[0]);
    let mut class_of = vec![0; n];
    for (k, c) in classes.iter().enumerate() {
        for &i in c {
            class_of[i] = k;
        }
    }
    let support = |k: usize| atoms.containing(classes[k][0]);
    let m = classes.len();
    let contained: Vec<Vec<bool>> = (0..m)
        .map(|a| {
            (0..m)
                .map(|b| support(a).iter().all(|j| support(b).binary_search(j).is_ok()))
                .collect()
        })
        .collect();
    let minimal: Vec<usize> = (0..m)
        .filter(|&a| !(0..m).any(|b| b != a && contained[b][a]))
        .collect();
    let element_exponents = (0..n).map(|i| atoms.exponent(i)).collect::<Result<Vec<_>>>()?;
    let reps: Vec<usize> = minimal.iter().map(|&k| classes[k][0]).collect();
    let e = reps.iter().map(|&r| element_exponents[r]).collect();
    Ok(PrimeClassification { classes, class_of, contained, minimal, reps, e, element_exponents })
}

/// Per-element exponent record for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentRecord {
    pub index: usize,
    pub gcd: u64,
    pub min: u64,
    pub minimal_class: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDiagnostics {
    pub source_rank: usize,
    pub class_group_rank: usize,
    /// Elements whose gcd and min of valuations over atoms differ.
    pub gcd_min_mismatches: Vec<ExponentRecord>,
    /// Target indices that received more than one minimal class.
    pub merges: Vec<Vec<usize>>,
    pub target_condensed: bool,
}

/// One block-homomorphism step `B(source) → B(target)`.
///
/// Serialized without the full classification; parsing recomputes the step
/// from `source` and rejects any disagreement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "StepJson", try_from = "StepJson")]
pub struct RefinementStep {
    pub source: GroundSet,
    pub classification: PrimeClassification,
    pub class_group: FgGroup,
    pub target: GroundSet,
    /// Target index of each minimal class.
    pub index_map: Vec<usize>,
    pub diagnostics: StepDiagnostics,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepJson {
    source: GroundSet,
    minimal_classes: Vec<Vec<usize>>,
    e: Vec<Exponent>,
    class_group: FgGroup,
    target: GroundSet,
    index_map: Vec<usize>,
    diagnostics: StepDiagnostics,
}

impl From<RefinementStep> for StepJson {
    fn from(s: RefinementStep) -> Self {
        let c = &s.classification;
        StepJson {
            minimal_classes: c.minimal.iter().map(|&k| c.classes[k].clone()).collect(),
            e: c.e.clone(),
            source: s.source,
            class_group: s.class_group,
            target: s.target,
            index_map: s.index_map,
            diagnostics: s.diagnostics,
        }
    }
}

impl TryFrom<StepJson> for RefinementStep {
    type Error = String;

    fn try_from(j: StepJson) -> Result<Self, String> {
        let step = divisor_theory_step(&j.source).map_err(|e| e.to_string())?;
        let view = StepJson::from(step.clone());
        let same = view.minimal_classes == j.minimal_classes
            && view.e == j.e
            && view.class_group == j.class_group
            && view.target == j.target
            && view.index_map == j.index_map
            && view.diagnostics == j.diagnostics;
        if !same {
            return Err(format!("step over {} does not match its recomputation", j.source));
        }
        Ok(step)
    }
}

impl RefinementStep {
    /// `∂(B)`: valuation of each minimal-class representative divided by its
    /// exponent.
    pub fn divisor_vector(&self, mult: &[u32]) -> Result<Vec<u32>> {
        let c = &self.classification;
        c.reps
            .iter()
            .zip(&c.e)
            .map(|(&r, e)| {
                let v = mult[r] as u64;
                if !v.is_multiple_of(e.gcd) {
                    return Err(Error::NotZeroSum);
                }
                Ok((v / e.gcd) as u32)
            })
            .collect()
    }

    /// The block homomorphism on raw multiplicity vectors (no zero-sum check).
    pub fn map_mult(&self, mult: &[u32]) -> Result<Vec<u32>> {
        if mult.len() != self.source.len() {
            return Err(Error::LengthMismatch { expected: self.source.len(), got: mult.len() });
        }
        let d = self.divisor_vector(mult)?;
        let mut out = vec![0u32; self.target.len()];
        for (q, v) in d.into_iter().enumerate() {
            out[self.index_map[q]] += v;
        }
        Ok(out)
    }
}

/// Computes the divisor theory of `B(G₀)` and the block homomorphism it
/// induces. `G₀` must be condensed.
pub fn divisor_theory_step(g0: &GroundSet) -> Result<RefinementStep> {
    let atoms = atoms_of(g0)?;
    let classification = classify_primes(&atoms)?;
    let k = classification.minimal.len();
    let free_k = FgGroup::free(k);
    let mut boundary = Vec::with_capacity(atoms.len());
    let mut step = RefinementStep {
        source: g0.clone(),
        classification,
        class_group: FgGroup::trivial(),
        target: GroundSet::new(FgGroup::trivial(), vec![])?,
        index_map: vec![],
        diagnostics: StepDiagnostics {
            source_rank: subgroup_from(g0.group(), g0.elements())?.rank(),
            class_group_rank: 0,
            gcd_min_mismatches: vec![],
            merges: vec![],
            target_condensed: true,
        },
    };
    for a in atoms.atoms() {
        let d: Vec<i64> = step.divisor_vector(a)?.into_iter().map(i64::from).collect();
        boundary.push(free_k.from_flat(&d)?);
    }
    let lattice = subgroup_from(&free_k, &boundary)?;
    let quotient = quotient_structure(&SubgroupBasis::whole(&free_k), &lattice)?;
    let mut target_elements: Vec<GroupElement> = Vec::new();
    let mut index_map = Vec::with_capacity(k);
    for basis in free_k.standard_generators() {
        let image = quotient.project(&basis)?;
        let t = match target_elements.iter().position(|e| *e == image) {
            Some(t) => t,
            None => {
                target_elements.push(image);
                target_elements.len() - 1
            }
        };
        index_map.push(t);
    }
    let class_group = quotient.group().clone();
    let target = GroundSet::new(class_group.clone(), target_elements)?;

    let c = &step.classification;
    step.diagnostics.gcd_min_mismatches = c
        .element_exponents
        .iter()
        .enumerate()
        .filter(|(_, x)| x.gcd != x.min)
        .map(|(i, x)| ExponentRecord {
            index: i,
            gcd: x.gcd,
            min: x.min,
            minimal_class: c.is_minimal_class(c.class_of[i]),
        })
        .collect();
    step.diagnostics.merges = (0..target.len())
        .map(|t| (0..k).filter(|&q| index_map[q] == t).collect::<Vec<_>>())
        .filter(|qs| qs.len() > 1)
        .collect();
    step.diagnostics.class_group_rank = class_group.rank();
    let target_atoms = atoms_of(&target)?;
    step.diagnostics.target_condensed = (0..target.len()).all(|i| !target_atoms.containing(i).is_empty());
    step.class_group = class_group;
    step.target = target;
    step.index_map = index_map;
    Ok(step)
}

/// The block homomorphism of `step` applied to a zero-sum sequence.
pub fn apply_beta(step: &RefinementStep, b: &ZSequence) -> Result<ZSequence> {
    if **b.ground() != step.source {
        return Err(Error::Precondition("sequence is not over the step's source".into()));
    }
    if !b.is_zero_sum()? {
        return Err(Error::NotZeroSum);
    }
    ZSequence::new(Arc::new(step.target.clone()), step.map_mult(b.mult())?)
}

/// A pair `(g, h)` such that `h` (or `-h` when `negated`) is not in the
/// submonoid generated by `G₀ \ {g}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorTheoryWitness {
    pub removed: usize,
    pub missing: usize,
    pub negated: bool,
}

/// Checks `⟨G₀⟩ = [G₀ \ {g}]` for every `g`, returning the first failure.
pub fn divisor_theory_witness(g0: &GroundSet, limits: SearchLimits) -> Result<Option<DivisorTheoryWitness>> {
    let group = g0.group();
    for removed in 0..g0.len() {
        let others: Vec<GroupElement> = g0
            .elements()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != removed)
            .map(|(_, e)| e.clone())
            .collect();
        for (missing, h) in g0.elements().iter().enumerate() {
            for negated in [false, true] {
                let target = if negated { group.neg(h)? } else { h.clone() };
                if !in_submonoid(group, &target, &others, limits)? {
                    return Ok(Some(DivisorTheoryWitness { removed, missing, negated }));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_divisor_theory(g0: &GroundSet) -> Result<bool> {
    Ok(divisor_theory_witness(g0, SearchLimits::default())?.is_none())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefineOptions {
    pub max_steps: usize,
    /// Steps to take after the first divisor theory is reached.
    pub extra_steps: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self { max_steps: DEFAULT_MAX_STEPS, extra_steps: 0 }
    }
}

/// Input indices removed by condensing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CondenseEvent {
    pub dropped: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDiagnostics {
    /// Present when condensing removed something.
    pub condense: Option<CondenseEvent>,
    /// `r(⟨G₀ⁿ⟩)` for the condensed input and every target.
    pub ranks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ChainJson")]
pub struct RefinementChain {
    /// The ground set as given.
    pub input: GroundSet,
    /// Its condensed part; the chain starts here.
    pub condensed: GroundSet,
    pub steps: Vec<RefinementStep>,
    #[serde(rename = "final")]
    pub final_ground: GroundSet,
    pub diagnostics: ChainDiagnostics,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainJson {
    input: GroundSet,
    condensed: GroundSet,
    steps: Vec<RefinementStep>,
    #[serde(rename = "final")]
    final_ground: GroundSet,
    diagnostics: ChainDiagnostics,
}

impl TryFrom<ChainJson> for RefinementChain {
    type Error = String;

    fn try_from(j: ChainJson) -> Result<Self, String> {
        let (condensed, kept) = condense(&j.input).map_err(|e| e.to_string())?;
        let dropped = dropped_indices(j.input.len(), &kept);
        if condensed != j.condensed || j.diagnostics.condense != condense_event(dropped) {
            return Err("condensed ground set does not match the input".into());
        }
        let mut cur = &j.condensed;
        for s in &j.steps {
            if &s.source != cur {
                return Err("consecutive steps do not compose".into());
            }
            cur = &s.target;
        }
        if cur != &j.final_ground {
            return Err("final ground set is not the last target".into());
        }
        if j.diagnostics.ranks != ranks_along(&j.condensed, &j.steps) {
            return Err("rank diagnostics do not match the steps".into());
        }
        Ok(RefinementChain {
            input: j.input,
            condensed: j.condensed,
            steps: j.steps,
            final_ground: j.final_ground,
            diagnostics: j.diagnostics,
        })
    }
}

fn dropped_indices(n: usize, kept: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| kept.binary_search(i).is_err()).collect()
}

fn condense_event(dropped: Vec<usize>) -> Option<CondenseEvent> {
    (!dropped.is_empty()).then_some(CondenseEvent { dropped })
}

fn ranks_along(condensed: &GroundSet, steps: &[RefinementStep]) -> Vec<usize> {
    let mut ranks = vec![steps.first().map_or_else(|| span_rank(condensed), |s| s.diagnostics.source_rank)];
    ranks.extend(steps.iter().map(|s| s.diagnostics.class_group_rank));
    ranks
}

fn span_rank(g0: &GroundSet) -> usize {
    subgroup_from(g0.group(), g0.elements()).map_or(0, |s| s.rank())
}

impl RefinementChain {
    /// Input indices dropped by condensing.
    pub fn dropped(&self) -> &[usize] {
        self.diagnostics.condense.as_ref().map_or(&[], |c| &c.dropped)
    }

    /// Maps a multiplicity vector over `input` through every step.
    pub fn map_mult(&self, mult: &[u32]) -> Result<Vec<u32>> {
        if mult.len() != self.input.len() {
            return Err(Error::LengthMismatch { expected: self.input.len(), got: mult.len() });
        }
        let dropped = self.dropped();
        if dropped.iter().any(|&i| mult[i] > 0) {
            return Err(Error::NotZeroSum);
        }
        let mut cur: Vec<u32> = (0..self.input.len())
            .filter(|i| dropped.binary_search(i).is_err())
            .map(|i| mult[i])
            .collect();
        for s in &self.steps {
            cur = s.map_mult(&cur)?;
        }
        Ok(cur)
    }

    /// θ*: the composed transfer homomorphism on a zero-sum sequence over
    /// the input ground set.
    pub fn apply(&self, b: &ZSequence) -> Result<ZSequence> {
        if **b.ground() != self.input {
            return Err(Error::Precondition("sequence is not over the chain's input".into()));
        }
        if !b.is_zero_sum()? {
            return Err(Error::NotZeroSum);
        }
        ZSequence::new(Arc::new(self.final_ground.clone()), self.map_mult(b.mult())?)
    }
}

impl fmt::Display for RefinementChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.condensed)?;
        for s in &self.steps {
            write!(f, " -> {}", s.target)?;
        }
        Ok(())
    }
}

fn chain_summary(steps: &[RefinementStep]) -> String {
    let parts: Vec<String> = steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let d = &s.diagnostics;
            format!(
                "step {i}: |source| {} rank {} -> class group {} (rank {}), gcd/min mismatches {:?}",
                s.source.len(),
                d.source_rank,
                s.class_group,
                d.class_group_rank,
                d.gcd_min_mismatches.iter().map(|r| (r.index, r.gcd, r.min)).collect::<Vec<_>>()
            )
        })
        .collect();
    parts.join("; ")
}

/// Condenses `g0`, then applies divisor-theory steps until the current
/// ground set passes [`is_divisor_theory`].
pub fn refine_chain(g0: &GroundSet, options: RefineOptions) -> Result<RefinementChain> {
    let (condensed, kept) = condense(g0)?;
    let dropped = dropped_indices(g0.len(), &kept);
    let mut steps: Vec<RefinementStep> = Vec::new();
    let mut current = condensed.clone();
    let mut extra = None;
    loop {
        if extra.is_none() && is_divisor_theory(&current)? {
            extra = Some(options.extra_steps);
        }
        if extra == Some(0) {
            break;
        }
        if steps.len() >= options.max_steps {
            return Err(Error::StepCapExceeded { steps: steps.len(), diagnostics: chain_summary(&steps) });
        }
        let step = divisor_theory_step(&current)?;
        if !step.diagnostics.target_condensed {
            return Err(Error::Precondition(format!(
                "block monoid target {} is not condensed",
                step.target
            )));
        }
        current = step.target.clone();
        steps.push(step);
        if let Some(n) = extra.as_mut() {
            *n -= 1;
        }
    }
    let diagnostics = ChainDiagnostics { condense: condense_event(dropped), ranks: ranks_along(&condensed, &steps) };
    Ok(RefinementChain { input: g0.clone(), condensed, steps, final_ground: current, diagnostics })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    ImageNotZeroSum { element: Vec<u32> },
    UnitPreimage { element: Vec<u32> },
    Lengths { element: Vec<u32>, source: Vec<u64>, target: Vec<u64> },
    SplitNotLifted { element: Vec<u32>, target_divisor: Vec<u32> },
    Catenary { element: Vec<u32>, source: u64, target: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub max_length: u64,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn divisors_in(all: &[Vec<u32>], b: &[u32]) -> Vec<Vec<u32>> {
    all.iter().filter(|v| v.iter().zip(b).all(|(x, y)| x <= y)).cloned().collect()
}

fn check_element(
    chain: &RefinementChain,
    source_all: &[Vec<u32>],
    target_all: &[Vec<u32>],
    final_ground: &GroundSet,
    fs: &mut Factorizer<'_>,
    ft: &mut Factorizer<'_>,
    b: &[u32],
) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    let image = chain.map_mult(&embed(chain, b))?;
    if !final_ground.sum(&image)?.is_zero() {
        out.push(Violation::ImageNotZeroSum { element: b.to_vec() });
        return Ok(out);
    }
    let b_empty = b.iter().all(|&m| m == 0);
    let image_empty = image.iter().all(|&m| m == 0);
    if image_empty && !b_empty {
        out.push(Violation::UnitPreimage { element: b.to_vec() });
    }
    let zs = fs.factor(b);
    let zt = ft.factor(&image);
    let ls = LengthSet::from_factorizations(&zs).as_vec();
    let lt = LengthSet::from_factorizations(&zt).as_vec();
    if ls != lt {
        out.push(Violation::Lengths { element: b.to_vec(), source: ls, target: lt });
    }
    let cs = catenary_of(&zs);
    let ct = catenary_of(&zt);
    if !(ct <= cs && cs <= ct.max(2)) {
        out.push(Violation::Catenary { element: b.to_vec(), source: cs, target: ct });
    }
    // every zero-sum divisor of θ(B) must be the image of a zero-sum divisor of B
    let lifted: std::collections::HashSet<Vec<u32>> = divisors_in(source_all, b)
        .iter()
        .map(|v| chain.map_mult(&embed(chain, v)))
        .collect::<Result<_>>()?;
    for t in divisors_in(target_all, &image) {
        if !lifted.contains(&t) {
            out.push(Violation::SplitNotLifted { element: b.to_vec(), target_divisor: t });
        }
    }
    Ok(out)
}

/// Condensed-coordinates vector back to input coordinates.
fn embed(chain: &RefinementChain, condensed: &[u32]) -> Vec<u32> {
    let mut out = vec![0; chain.input.len()];
    let mut it = condensed.iter();
    let dropped = chain.dropped();
    for (i, slot) in out.iter_mut().enumerate() {
        if dropped.binary_search(&i).is_err() {
            *slot = *it.next().unwrap();
        }
    }
    out
}

/// Checks the transfer properties of θ* on every zero-sum sequence of length
/// at most `maxlen` over the condensed input: equal sets of lengths, no
/// nonempty sequence sent to the identity, liftable two-factor splittings, and
/// `c(θ(B)) ≤ c(B) ≤ max(c(θ(B)), 2)`.
pub fn verify_transfer(chain: &RefinementChain, maxlen: u64) -> Result<TransferReport> {
    let source_atoms: Arc<AtomSet> = atoms_of(&chain.condensed)?;
    let target_atoms: Arc<AtomSet> = atoms_of(&chain.final_ground)?;
    let source_all = source_atoms.zero_sum_sequences(maxlen);
    let target_all = target_atoms.zero_sum_sequences(maxlen);
    let final_ground = &chain.final_ground;
    let per_element: Vec<Vec<Violation>> = source_all
        .par_iter()
        .map_init(
            || (Factorizer::new(&source_atoms), Factorizer::new(&target_atoms)),
            |(fs, ft), b| check_element(chain, &source_all, &target_all, final_ground, fs, ft, b),
        )
        .collect::<Result<_>>()?;
    Ok(TransferReport {
        max_length: maxlen,
        checked: source_all.len(),
        violations: per_element.into_iter().flatten().collect(),
    })
}
