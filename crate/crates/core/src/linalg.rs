//! Dense exact linear algebra over the rationals.
//!
//! Everything here is plain Gaussian elimination with the pivot chosen as the
//! leftmost nonzero column, so results are deterministic.

use num_traits::{One, Zero};

use crate::algebra::Rational;

/// Reduced row echelon form of a row-generated subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Rref {
    /// Nonzero rows, each with a leading 1 at `pivots[k]`.
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Coordinates of `v` with respect to `rows`, or `None` if `v` is not in
    /// their span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.ncols);
        let coords: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, row) in coords.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in residual.iter_mut().zip(row) {
                if !x.is_zero() {
                    *r -= c * x;
                }
            }
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }
}

/// Row reduces `rows` (each of length `ncols`).
pub fn rref(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Rref {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = Rational::one() / &rows[rank][col];
        if !inv.is_one() {
            for x in rows[rank].iter_mut().skip(col) {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    Rref { rows, pivots, ncols }
}

/// Rank of the matrix with the given rows. Uses forward elimination only.
pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut rows: Vec<Vec<Rational>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for (x, p) in row.iter_mut().zip(pivot_row).skip(col) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Basis of `{ c : sum_i c_i * rows[i] = 0 }`.
pub fn left_kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let n = rows.len();
    let augmented: Vec<Vec<Rational>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let reduced = rref(augmented, ncols + n);
    reduced
        .rows
        .into_iter()
        .zip(reduced.pivots)
        .filter(|(_, p)| *p >= ncols)
        .map(|(row, _)| row[ncols..].to_vec())
        .collect()
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(matrix: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = matrix.len();
    let augmented: Vec<Vec<Rational>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let reduced = rref(augmented, 2 * n);
    if reduced.rank() < n || reduced.pivots[n - 1] >= n {
        return None;
    }
    Some(reduced.rows.into_iter().map(|r| r[n..].to_vec()).collect())
}
