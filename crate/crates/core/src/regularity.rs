//! Regularity of triangulations: checking that a height function induces a
//! given triangulation, and finding such a function by exact linear
//! programming.
//!
//! For an interior edge `v–x` with opposite vertices `u` and `w`, adjacent
//! unimodular triangles satisfy the affine relation
//! `u + w = (2 - β)·v + β·x` for an integer `β` (`β = 1` exactly when the
//! quadrangle is a parallelogram, which is the case for every strictly convex
//! quadrangle).  The lifted surface folds upwards across the edge iff
//! `ω(u) + ω(w) > (2 - β)·ω(v) + β·ω(x)`.  A height function satisfying this
//! strict inequality on every interior edge is locally convex, hence convex,
//! and induces exactly the given triangulation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{lattice_points, lex_index, Point};
use crate::triangulation::{edge, Edge, Triangle, Triangulation};

/// A failed folding condition on one interior edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoldingViolation {
    pub u: Point,
    pub w: Point,
    pub v: Point,
    pub x: Point,
    /// `ω(u) + ω(w)`.
    pub lhs: i64,
    /// `(2 - β)·ω(v) + β·ω(x)`.
    pub rhs: i64,
}

impl std::fmt::Display for FoldingViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({},{} | {},{}): {} vs {}",
            fmt_point(self.u),
            fmt_point(self.w),
            fmt_point(self.v),
            fmt_point(self.x),
            self.lhs,
            self.rhs
        )
    }
}

fn fmt_point(p: Point) -> String {
    format!("({},{})", p.0, p.1)
}

/// One linear folding constraint: `ω(u) + ω(w) - α·ω(v) - β·ω(x) > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FoldingCondition {
    pub u: Point,
    pub w: Point,
    pub v: Point,
    pub x: Point,
    pub alpha: i64,
    pub beta: i64,
}

impl FoldingCondition {
    fn evaluate(&self, height: impl Fn(Point) -> i64) -> (i64, i64) {
        let lhs = height(self.u) + height(self.w);
        let rhs = self.alpha * height(self.v) + self.beta * height(self.x);
        (lhs, rhs)
    }
}

/// Folding conditions of every edge shared by two triangles of the list.
pub fn folding_conditions(triangles: &[Triangle]) -> Vec<FoldingCondition> {
    let mut by_edge: BTreeMap<Edge, Vec<Point>> = BTreeMap::new();
    for t in triangles {
        for (a, b, c) in [(0, 1, 2), (1, 2, 0), (0, 2, 1)] {
            by_edge.entry(edge(t[a], t[b])).or_default().push(t[c]);
        }
    }
    let mut out = Vec::new();
    for ((v, x), opposite) in by_edge {
        if opposite.len() != 2 {
            continue;
        }
        let (u, w) = (opposite[0], opposite[1]);
        let r = (u.0 + w.0 - 2 * v.0, u.1 + w.1 - 2 * v.1);
        let e = (x.0 - v.0, x.1 - v.1);
        let beta = if e.0 != 0 { r.0 / e.0 } else { r.1 / e.1 } as i64;
        out.push(FoldingCondition { u, w, v, x, alpha: 2 - beta, beta });
    }
    out
}

/// Folding violations of an arbitrary triangle complex under a height map.
pub fn violations_for(triangles: &[Triangle], height: impl Fn(Point) -> i64 + Copy) -> Vec<FoldingViolation> {
    folding_conditions(triangles)
        .into_iter()
        .filter_map(|c| {
            let (lhs, rhs) = c.evaluate(height);
            (lhs <= rhs).then_some(FoldingViolation { u: c.u, w: c.w, v: c.v, x: c.x, lhs, rhs })
        })
        .collect()
}

/// Lists every interior edge whose folding condition fails; the result is
/// empty iff `lifting` (indexed in lexicographic order) induces `t`.
pub fn verify_lifting(t: &Triangulation, lifting: &[i64]) -> Result<Vec<FoldingViolation>> {
    let d = t.degree();
    let n = lattice_points(d).len();
    if lifting.len() != n {
        return Err(Error::Format(format!("lifting has {} values, expected {n}", lifting.len())));
    }
    Ok(violations_for(t.triangles(), |p| lifting[lex_index(d, p).expect("vertex in triangle")]))
}

/// Searches for an integer lifting inducing `t`.  Returns `None` when the
/// triangulation is not regular.  The returned lifting is non-negative with
/// minimum zero and always passes [`verify_lifting`].
pub fn find_lifting(t: &Triangulation) -> Option<Vec<i64>> {
    let d = t.degree();
    let n = lattice_points(d).len();
    let rows: Vec<Vec<(usize, i64)>> = folding_conditions(t.triangles())
        .iter()
        .map(|c| {
            let mut row: BTreeMap<usize, i64> = BTreeMap::new();
            for (p, coef) in [(c.u, 1), (c.w, 1), (c.v, -c.alpha), (c.x, -c.beta)] {
                *row.entry(lex_index(d, p).expect("vertex")).or_insert(0) += coef;
            }
            row.into_iter().filter(|&(_, c)| c != 0).collect()
        })
        .collect();
    let solution = feasible_point(n, &rows)?;
    let lcm = solution.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let scaled: Vec<BigInt> = solution.iter().map(|q| (q * &lcm).to_integer()).collect();
    let min = scaled.iter().min().cloned().unwrap_or_default();
    let lifting: Option<Vec<i64>> = scaled.iter().map(|v| (v - &min).to_i64()).collect();
    let lifting = lifting?;
    debug_assert!(verify_lifting(t, &lifting).map(|v| v.is_empty()).unwrap_or(false));
    Some(lifting)
}

/// Exact phase-one simplex for `{ y >= 0 : a_i · y >= 1 }` using Bland's
/// rule.  Rows are sparse `(column, coefficient)` lists.
fn feasible_point(n: usize, rows: &[Vec<(usize, i64)>]) -> Option<Vec<BigRational>> {
    let m = rows.len();
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }
    // Columns: y (n), surplus s (m), artificial r (m), then the right-hand side.
    let cols = n + 2 * m;
    let rhs = cols;
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut tab: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row = vec![BigRational::zero(); cols + 1];
            for &(j, c) in &rows[i] {
                row[j] = q(c);
            }
            row[n + i] = q(-1);
            row[n + m + i] = q(1);
            row[rhs] = q(1);
            row
        })
        .collect();
    let mut basis: Vec<usize> = (0..m).map(|i| n + m + i).collect();
    // Reduced costs for minimising the sum of artificials.
    let mut cost = vec![BigRational::zero(); cols + 1];
    for row in &tab {
        for j in 0..=cols {
            if j < n + m || j == rhs {
                cost[j] -= &row[j];
            }
        }
    }
    while let Some(entering) = (0..cols).find(|&j| cost[j].is_negative()) {
        let mut leaving: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if tab[i][entering].is_positive() {
                let ratio = &tab[i][rhs] / &tab[i][entering];
                let better = match &leaving {
                    None => true,
                    Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        let Some((pivot_row, _)) = leaving else {
            // Unbounded direction in phase one cannot occur (objective >= 0).
            return None;
        };
        let pivot = tab[pivot_row][entering].clone();
        for v in tab[pivot_row].iter_mut() {
            *v /= &pivot;
        }
        let prow = tab[pivot_row].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == pivot_row || row[entering].is_zero() {
                continue;
            }
            let factor = row[entering].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        if !cost[entering].is_zero() {
            let factor = cost[entering].clone();
            for (v, p) in cost.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        basis[pivot_row] = entering;
        if cost[rhs].is_zero() {
            break;
        }
    }
    if !cost[rhs].is_zero() {
        return None;
    }
    let mut y = vec![BigRational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            y[b] = tab[i][rhs].clone();
        }
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::honeycomb;

    #[test]
    fn parallelogram_conditions() {
        let t = honeycomb(2).unwrap();
        for c in folding_conditions(t.triangles()) {
            assert_eq!((c.alpha, c.beta), (1, 1));
        }
    }

    #[test]
    fn honeycomb_lifting_found() {
        for d in 1..=6 {
            let t = honeycomb(d).unwrap();
            let l = find_lifting(&t).expect("honeycomb is regular");
            assert!(verify_lifting(&t, &l).unwrap().is_empty());
            assert_eq!(*l.iter().min().unwrap(), 0);
        }
    }

    #[test]
    fn wrong_lifting_is_reported() {
        let t = honeycomb(2).unwrap();
        let flat = vec![0; 6];
        let v = verify_lifting(&t, &flat).unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v[0].lhs, v[0].rhs);
    }

    #[test]
    fn violation_display() {
        let v = FoldingViolation { u: (0, 0), w: (1, 1), v: (1, 0), x: (0, 1), lhs: 1, rhs: 2 };
        assert_eq!(v.to_string(), "((0,0),(1,1) | (1,0),(0,1)): 1 vs 2");
    }
}
