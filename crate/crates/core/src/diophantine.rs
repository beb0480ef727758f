//! Minimal nonnegative solutions of `Σ xᵢ·cᵢ = 0` over a finitely generated
//! abelian group.
//!
//! The search is a graded breadth-first completion by total degree. A node `x`
//! is extended by a unit vector `e_j` only if the free part `r` of its residual
//! satisfies `⟨r, free(c_j)⟩ < 0`, or `r = 0` (torsion residuals are not
//! constrained). Nodes dominating an already found solution are dropped. Every
//! minimal solution `s` is reached: for a proper prefix `x < s` with `r ≠ 0`,
//! `⟨r, free(A(s - x))⟩ = -|r|² < 0`, so some step inside `supp(s - x)` is
//! admissible.

use rayon::prelude::*;
use thiserror::Error;

use crate::group::{FgGroup, GroupElement, GroupError};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiophError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("resource limit exceeded: {expanded} nodes expanded (limit {limit})")]
    ResourceLimit { expanded: u64, limit: u64 },
}

pub type Result<T, E = DiophError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self { max_nodes: DEFAULT_NODE_BUDGET }
    }
}

/// The homogeneous system with one unknown per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiophSystem {
    group: FgGroup,
    columns: Vec<GroupElement>,
}

impl DiophSystem {
    pub fn new(group: FgGroup, columns: Vec<GroupElement>) -> Result<Self> {
        for c in &columns {
            group.check(c)?;
        }
        Ok(Self { group, columns })
    }

    pub fn group(&self) -> &FgGroup {
        &self.group
    }

    pub fn columns(&self) -> &[GroupElement] {
        &self.columns
    }

    pub fn is_solution(&self, x: &[u32]) -> Result<bool> {
        Ok(self.group.linear_combination(x, &self.columns)?.is_zero())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalSolutionSet {
    pub system: DiophSystem,
    /// Lexicographically sorted, pairwise incomparable.
    pub solutions: Vec<Vec<u32>>,
}

pub fn dominates(big: &[u32], small: &[u32]) -> bool {
    big.iter().zip(small).all(|(b, s)| b >= s)
}

#[derive(Clone)]
struct Node {
    x: Vec<u32>,
    residual: Vec<i64>,
}

struct Searcher<'a> {
    rank: usize,
    moduli: &'a [i64],
    cols: Vec<Vec<i64>>,
    caps: Option<&'a [u32]>,
}

impl Searcher<'_> {
    fn step(&self, node: &Node, j: usize) -> Option<Result<Node>> {
        if let Some(caps) = self.caps {
            if node.x[j] >= caps[j] {
                return None;
            }
        }
        let col = &self.cols[j];
        let free_r = &node.residual[..self.rank];
        if free_r.iter().any(|&c| c != 0) {
            let dot: i128 = free_r.iter().zip(col).map(|(&a, &b)| a as i128 * b as i128).sum();
            if dot >= 0 {
                return None;
            }
        }
        let mut residual = Vec::with_capacity(node.residual.len());
        for (i, (&a, &b)) in node.residual.iter().zip(col).enumerate() {
            let v = match a.checked_add(b) {
                Some(v) => v,
                None => return Some(Err(GroupError::Overflow.into())),
            };
            residual.push(if i < self.rank { v } else { v.rem_euclid(self.moduli[i - self.rank]) });
        }
        let mut x = node.x.clone();
        x[j] += 1;
        Some(Ok(Node { x, residual }))
    }
}

fn search(sys: &DiophSystem, limits: SearchLimits, caps: Option<&[u32]>, stop_at: Option<usize>) -> Result<Vec<Vec<u32>>> {
    let m = sys.columns.len();
    let searcher = Searcher {
        rank: sys.group.rank(),
        moduli: sys.group.torsion(),
        cols: sys.columns.iter().map(|c| c.to_flat()).collect(),
        caps,
    };
    let root = Node { x: vec![0; m], residual: vec![0; sys.group.dim()] };
    let mut frontier: Vec<Node> = Vec::new();
    let mut found: Vec<Vec<u32>> = Vec::new();
    // degree one: every unit vector is admissible from the zero residual
    for j in 0..m {
        if let Some(child) = searcher.step(&root, j) {
            let child = child?;
            if child.residual.iter().all(|&c| c == 0) {
                found.push(child.x);
            } else {
                frontier.push(child);
            }
        }
    }
    let mut expanded: u64 = 0;
    while !frontier.is_empty() {
        if stop_at.is_some_and(|k| found.iter().any(|s| s[k] > 0)) {
            break;
        }
        expanded += frontier.len() as u64;
        if expanded > limits.max_nodes {
            return Err(DiophError::ResourceLimit { expanded, limit: limits.max_nodes });
        }
        let mut children: Vec<Node> = frontier
            .par_iter()
            .flat_map_iter(|node| (0..m).filter_map(|j| searcher.step(node, j)))
            .collect::<Result<Vec<_>>>()?;
        children.par_sort_unstable_by(|a, b| a.x.cmp(&b.x));
        children.dedup_by(|a, b| a.x == b.x);
        let known = &found;
        let kept: Vec<Node> = children
            .into_par_iter()
            .filter(|c| !known.iter().any(|s| dominates(&c.x, s)))
            .collect();
        frontier = Vec::with_capacity(kept.len());
        for c in kept {
            if c.residual.iter().all(|&v| v == 0) {
                found.push(c.x);
            } else {
                frontier.push(c);
            }
        }
    }
    found.sort();
    Ok(found)
}

/// All minimal nonzero solutions, in lexicographic order.
pub fn minimal_solutions(sys: &DiophSystem, limits: SearchLimits) -> Result<MinimalSolutionSet> {
    let solutions = search(sys, limits, None, None)?;
    Ok(MinimalSolutionSet { system: sys.clone(), solutions })
}

/// Whether `target ∈ [gens]`, the submonoid generated by `gens`.
///
/// Homogenizes with an extra column `-target` capped at multiplicity one and
/// looks for a minimal solution using that column.
pub fn in_submonoid(
    group: &FgGroup,
    target: &GroupElement,
    gens: &[GroupElement],
    limits: SearchLimits,
) -> Result<bool> {
    if target.is_zero() {
        group.check(target)?;
        return Ok(true);
    }
    let mut columns = gens.to_vec();
    columns.push(group.neg(target)?);
    let sys = DiophSystem::new(group.clone(), columns)?;
    let mut caps = vec![u32::MAX; gens.len()];
    caps.push(1);
    let aux = gens.len();
    let sols = search(&sys, limits, Some(&caps), Some(aux))?;
    Ok(sols.iter().any(|s| s[aux] == 1))
}
