//! Integer lattice normal forms over arbitrary-precision integers.
//!
//! Matrices are lists of rows; a lattice is the row span over `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Row = Vec<BigInt>;

pub fn to_big(v: &[i64]) -> Row {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The result has no zero rows, strictly increasing pivot columns, positive
/// pivots, and every entry above a pivot reduced into `[0, pivot)`. It depends
/// only on the lattice, not on the generating rows.
pub fn hermite_normal_form(rows: &[Row], ncols: usize) -> Vec<Row> {
    let mut m: Vec<Row> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    debug_assert!(m.iter().all(|r| r.len() == ncols));
    let mut top = 0;
    for col in 0..ncols {
        if top == m.len() {
            break;
        }
        loop {
            // smallest nonzero entry in this column at or below `top`
            let pivot = (top..m.len())
                .filter(|&i| !m[i][col].is_zero())
                .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()));
            let Some(p) = pivot else { break };
            m.swap(top, p);
            let mut done = true;
            for i in top + 1..m.len() {
                if m[i][col].is_zero() {
                    continue;
                }
                let q = m[i][col].div_floor(&m[top][col]);
                let (head, tail) = m.split_at_mut(i);
                sub_multiple(&mut tail[0], &head[top], &q);
                if !tail[0][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if top < m.len() && !m[top][col].is_zero() {
            if m[top][col].is_negative() {
                for x in m[top].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..top {
                let q = m[i][col].div_floor(&m[top][col]);
                if !q.is_zero() {
                    let (head, tail) = m.split_at_mut(top);
                    sub_multiple(&mut head[i], &tail[0], &q);
                }
            }
            top += 1;
        }
    }
    m.truncate(top);
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    m
}

fn sub_multiple(target: &mut Row, source: &Row, q: &BigInt) {
    for (t, s) in target.iter_mut().zip(source) {
        *t -= q * s;
    }
}

fn pivot_col(row: &Row) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

/// Coordinates of `v` in the basis given by an HNF matrix, or `None` if `v`
/// is not in the lattice.
pub fn solve_in_basis(hnf: &[Row], v: &Row) -> Option<Row> {
    let mut rest = v.clone();
    let mut coords = Vec::with_capacity(hnf.len());
    for row in hnf {
        let p = pivot_col(row).expect("HNF rows are nonzero");
        if rest[..p].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, r) = rest[p].div_rem(&row[p]);
        if !r.is_zero() {
            return None;
        }
        sub_multiple(&mut rest, row, &q);
        coords.push(q);
    }
    rest.iter().all(|x| x.is_zero()).then_some(coords)
}

/// Smith normal form data for the row lattice of an `n × ncols` matrix `M`:
/// unimodular `V` and invariant factors `d₁ | d₂ | … | d_t` (all positive) with
/// `rowspace(M)·V = d₁Z ⊕ … ⊕ d_tZ ⊕ 0`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub invariants: Vec<BigInt>,
    pub col_transform: Vec<Row>,
}

impl SmithForm {
    /// `x·V`.
    pub fn transform(&self, x: &Row) -> Row {
        let n = self.col_transform.len();
        (0..n)
            .map(|j| {
                x.iter()
                    .zip(&self.col_transform)
                    .fold(BigInt::zero(), |acc, (xi, vrow)| acc + xi * &vrow[j])
            })
            .collect()
    }
}

pub fn smith_normal_form(rows: &[Row], ncols: usize) -> SmithForm {
    let mut m: Vec<Row> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut v: Vec<Row> = (0..ncols)
        .map(|i| (0..ncols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let nrows = m.len();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !m[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        swap_cols(&mut m, t, pj);
        swap_cols(&mut v, t, pj);

        let mut clean = true;
        for i in t + 1..nrows {
            if m[i][t].is_zero() {
                continue;
            }
            let q = m[i][t].div_floor(&m[t][t]);
            let (head, tail) = m.split_at_mut(i);
            sub_multiple(&mut tail[0], &head[t], &q);
            if !tail[0][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..ncols {
            if m[t][j].is_zero() {
                continue;
            }
            let q = m[t][j].div_floor(&m[t][t]);
            col_sub_multiple(&mut m, j, t, &q);
            col_sub_multiple(&mut v, j, t, &q);
            if !m[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // enforce divisibility of the rest of the block by the pivot
        let offender = (t + 1..nrows)
            .find(|&i| (t + 1..ncols).any(|j| !m[i][j].is_multiple_of(&m[t][t])));
        if let Some(i) = offender {
            let (head, tail) = m.split_at_mut(i);
            for (a, b) in head[t].iter_mut().zip(tail[0].iter()) {
                *a += b;
            }
            continue;
        }
        if m[t][t].is_negative() {
            for x in m[t].iter_mut() {
                *x = -&*x;
            }
        }
        t += 1;
    }
    SmithForm { invariants: (0..t).map(|i| m[i][i].clone()).collect(), col_transform: v }
}

fn swap_cols(m: &mut [Row], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// column `j` -= q · column `k`
fn col_sub_multiple(m: &mut [Row], j: usize, k: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let d = q * &row[k];
        row[j] -= d;
    }
}
