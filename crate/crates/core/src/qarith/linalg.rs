//! Exact linear algebra over `Q(q)` by fraction-free elimination.
//!
//! Rows are first cleared of denominators so that all entries lie in
//! `Z[q, q^-1]`; Bareiss elimination then runs inside that ring, every
//! division being exact. Pivoting is deterministic: columns are scanned left
//! to right and the first row (from the current one down) with a nonzero
//! entry becomes the pivot row, so the pivot columns are the leftmost
//! independent columns.

use super::{LaurentInt, RatQ};
use crate::error::Result;

/// A dense row-major matrix.
pub type Matrix<T> = Vec<Vec<T>>;

/// Result of [`solve_exact`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// A solution `X` with `M X = rhs`; free variables are set to zero.
    Solved { x: Matrix<RatQ>, pivots: Vec<usize>, rank: usize },
    /// `M X = rhs` has no solution; `column` is the first inconsistent
    /// right-hand side column.
    NoSolution { pivots: Vec<usize>, rank: usize, column: usize },
}

impl Solution {
    pub fn rank(&self) -> usize {
        match self {
            Solution::Solved { rank, .. } | Solution::NoSolution { rank, .. } => *rank,
        }
    }

    pub fn pivots(&self) -> &[usize] {
        match self {
            Solution::Solved { pivots, .. } | Solution::NoSolution { pivots, .. } => pivots,
        }
    }

    pub fn into_solution(self) -> Option<Matrix<RatQ>> {
        match self {
            Solution::Solved { x, .. } => Some(x),
            Solution::NoSolution { .. } => None,
        }
    }
}

/// Multiplies a row by a common denominator so all entries are Laurent.
fn clear_row(row: &[RatQ]) -> Vec<LaurentInt> {
    let mut den = LaurentInt::one();
    for x in row {
        if !x.den().is_one() {
            let g = LaurentInt::poly_gcd(&den, x.den());
            den = &den * &x.den().div_exact(&g).expect("gcd divides");
        }
    }
    row.iter()
        .map(|x| {
            let scaled = x.mul_laurent(&den);
            scaled.as_laurent().cloned().expect("denominator cleared")
        })
        .collect()
}

/// Fraction-free echelon form. Returns the reduced rows, pivot positions
/// `(row, column)`, restricted to the first `ncols` columns.
#[allow(clippy::needless_range_loop)]
fn bareiss(mut a: Matrix<LaurentInt>, ncols: usize) -> (Matrix<LaurentInt>, Vec<(usize, usize)>) {
    let nrows = a.len();
    let width = a.first().map_or(0, |r| r.len());
    let mut prev = LaurentInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..nrows {
            let factor = a[i][c].clone();
            for j in 0..width {
                if j == c {
                    continue;
                }
                let v = &(&piv * &a[i][j]) - &(&factor * &a[r][j]);
                a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][c] = LaurentInt::zero();
        }
        prev = piv;
        pivots.push((r, c));
        r += 1;
    }
    (a, pivots)
}

/// Rank and pivot columns (leftmost independent columns) of `m`.
pub fn rank_profile(m: &Matrix<RatQ>) -> (usize, Vec<usize>) {
    let ncols = m.first().map_or(0, |r| r.len());
    let rows: Matrix<LaurentInt> = m.iter().map(|r| clear_row(r)).collect();
    let (_, piv) = bareiss(rows, ncols);
    (piv.len(), piv.into_iter().map(|(_, c)| c).collect())
}

pub fn rank(m: &Matrix<RatQ>) -> usize {
    rank_profile(m).0
}

/// Solves `m X = rhs` exactly. `m` is `r x c`, `rhs` is `r x k`.
pub fn solve_exact(m: &Matrix<RatQ>, rhs: &Matrix<RatQ>) -> Result<Solution> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let k = rhs.first().map_or(0, |r| r.len());
    assert_eq!(rhs.len(), nrows, "right-hand side row count must match");
    let aug: Matrix<LaurentInt> = (0..nrows)
        .map(|i| {
            let mut row = m[i].clone();
            row.extend(rhs[i].iter().cloned());
            clear_row(&row)
        })
        .collect();
    let (ech, piv) = bareiss(aug, ncols);
    let rank = piv.len();
    let pivots: Vec<usize> = piv.iter().map(|&(_, c)| c).collect();
    for row in ech.iter().skip(rank) {
        if let Some(col) = (0..k).find(|&j| !row[ncols + j].is_zero()) {
            return Ok(Solution::NoSolution { pivots, rank, column: col });
        }
    }
    let mut x = vec![vec![RatQ::zero(); k]; ncols];
    for (pr, &(row, col)) in piv.iter().enumerate().rev() {
        debug_assert_eq!(pr, row);
        let diag = RatQ::from_laurent(ech[row][col].clone());
        for j in 0..k {
            let mut acc = RatQ::from_laurent(ech[row][ncols + j].clone());
            for &(_, c2) in &piv[pr + 1..] {
                let e = &ech[row][c2];
                if !e.is_zero() && !x[c2][j].is_zero() {
                    acc = &acc - &x[c2][j].mul_laurent(e);
                }
            }
            x[col][j] = acc.checked_div(&diag)?;
        }
    }
    Ok(Solution::Solved { x, pivots, rank })
}

/// Inverse of a square nonsingular matrix; `None` when singular.
pub fn inverse(m: &Matrix<RatQ>) -> Result<Option<Matrix<RatQ>>> {
    let n = m.len();
    let id = identity(n);
    match solve_exact(m, &id)? {
        Solution::Solved { x, rank, .. } if rank == n => Ok(Some(x)),
        _ => Ok(None),
    }
}

pub fn identity(n: usize) -> Matrix<RatQ> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { RatQ::one() } else { RatQ::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix<RatQ>, b: &Matrix<RatQ>) -> Matrix<RatQ> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner)
                        .filter(|&l| !row[l].is_zero() && !b[l][j].is_zero())
                        .map(|l| &row[l] * &b[l][j])
                        .sum()
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix<RatQ>, v: &[RatQ]) -> Vec<RatQ> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                .map(|(x, y)| x * y)
                .sum()
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &Matrix<T>) -> Matrix<T> {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(terms: &[(i64, i64)]) -> RatQ {
        RatQ::from_laurent(LaurentInt::from_terms(terms.iter().copied()))
    }

    #[test]
    fn identity_system() {
        let rhs = vec![vec![l(&[(1, 1)])], vec![l(&[(-2, 3)])]];
        let sol = solve_exact(&identity(2), &rhs).unwrap();
        assert_eq!(sol.rank(), 2);
        assert_eq!(sol.into_solution().unwrap(), rhs);
    }

    #[test]
    fn rank_one_matrix() {
        // [[q, 1], [1, q^-1]] has determinant 0
        let m = vec![vec![l(&[(1, 1)]), l(&[(0, 1)])], vec![l(&[(0, 1)]), l(&[(-1, 1)])]];
        assert_eq!(rank_profile(&m), (1, vec![0]));
    }

    #[test]
    fn invertible_two_by_two() {
        // M = [[q, 1], [1, q]], det = q^2 - 1, inverse = 1/(q^2-1) [[q, -1], [-1, q]]
        let m = vec![vec![l(&[(1, 1)]), l(&[(0, 1)])], vec![l(&[(0, 1)]), l(&[(1, 1)])]];
        let inv = inverse(&m).unwrap().unwrap();
        let det = LaurentInt::from_terms([(2, 1), (0, -1)]);
        let expect = |num: RatQ| num.div_laurent(&det).unwrap();
        assert_eq!(inv[0][0], expect(l(&[(1, 1)])));
        assert_eq!(inv[0][1], expect(l(&[(0, -1)])));
        assert_eq!(inv[1][1], expect(l(&[(1, 1)])));
        assert_eq!(mat_mul(&m, &inv), identity(2));
    }

    #[test]
    fn inconsistent_system_is_reported() {
        let m = vec![vec![l(&[(0, 1)]), l(&[(0, 1)])], vec![l(&[(0, 2)]), l(&[(0, 2)])]];
        let rhs = vec![vec![l(&[(0, 1)])], vec![l(&[(0, 3)])]];
        match solve_exact(&m, &rhs).unwrap() {
            Solution::NoSolution { rank, pivots, column } => {
                assert_eq!(rank, 1);
                assert_eq!(pivots, vec![0]);
                assert_eq!(column, 0);
            }
            other => panic!("expected no solution, got {other:?}"),
        }
    }

    #[test]
    fn skips_dependent_columns() {
        // columns 0 and 1 dependent, column 2 independent
        let m = vec![
            vec![l(&[(0, 1)]), l(&[(1, 1)]), l(&[(0, 1)])],
            vec![l(&[(0, 2)]), l(&[(1, 2)]), l(&[(0, 5)])],
        ];
        assert_eq!(rank_profile(&m), (2, vec![0, 2]));
        let rhs = vec![vec![l(&[(0, 3)])], vec![l(&[(0, 9)])]];
        let x = solve_exact(&m, &rhs).unwrap().into_solution().unwrap();
        let back = mat_mul(&m, &x);
        assert_eq!(back, rhs);
    }
}
