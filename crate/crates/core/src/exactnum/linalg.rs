//! Exact linear algebra over the parameter field: fraction-free rank and
//! linear-system solving.

use super::{ParamPoly, ParamRational};

/// A rectangular matrix of [`ParamRational`] entries in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ParamRational>,
}

impl ParamMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<ParamRational>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Self { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![ParamRational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = ParamRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ParamRational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self::new(nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &ParamRational {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut ParamRational {
        &mut self.data[i * self.cols + j]
    }

    /// Clears denominators row by row, producing a polynomial matrix with the
    /// same row space. Each row is scaled by a common multiple of its entries'
    /// denominators (deduplicated by exact division, so repeated denominators
    /// are not multiplied in twice).
    fn cleared_rows(&self) -> Vec<Vec<ParamPoly>> {
        (0..self.rows)
            .map(|i| {
                let mut mult = ParamPoly::one();
                for j in 0..self.cols {
                    let den = self.at(i, j).denom();
                    if mult.exact_div(den).is_err() {
                        mult = &mult * den;
                    }
                }
                (0..self.cols)
                    .map(|j| {
                        let e = self.at(i, j);
                        let cofactor = mult
                            .exact_div(e.denom())
                            .expect("row multiplier is a common denominator multiple");
                        e.numer() * &cofactor
                    })
                    .collect()
            })
            .collect()
    }
}

/// Exact rank over the fraction field of the parameter polynomials.
///
/// Row denominators are cleared first; elimination is single-step Bareiss
/// (fraction-free: every division is exact by the previous pivot), which keeps
/// intermediate entries polynomial instead of deeply nested fractions. Pivot
/// choice is deterministic: columns are scanned left to right and the first
/// row with a nonzero entry is used.
pub fn bareiss_rank(m: &ParamMatrix) -> usize {
    let mut w = m.cleared_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0;
    let mut prev = ParamPoly::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot_row) = (rank..rows).find(|&i| !w[i][col].is_zero()) else {
            continue;
        };
        w.swap(rank, pivot_row);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let cross = &(&w[rank][col] * &w[i][j]) - &(&w[i][col] * &w[rank][j]);
                w[i][j] = cross
                    .exact_div(&prev)
                    .expect("Bareiss cross-product is divisible by the previous pivot");
            }
            w[i][col] = ParamPoly::zero();
        }
        prev = w[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Solves `M x = b` exactly; returns `None` when the system is inconsistent.
///
/// Forward elimination runs fraction-free on the augmented polynomial matrix
/// (same pivot rule as [`bareiss_rank`]), then back substitution over the
/// fraction field recovers one solution with all free variables set to zero.
pub fn solve_linear(m: &ParamMatrix, b: &[ParamRational]) -> Option<Vec<ParamRational>> {
    assert_eq!(b.len(), m.rows, "right-hand side length mismatch");
    let aug = {
        let mut rows = Vec::with_capacity(m.rows);
        for i in 0..m.rows {
            let mut row: Vec<ParamRational> = (0..m.cols).map(|j| m.at(i, j).clone()).collect();
            row.push(b[i].clone());
            rows.push(row);
        }
        ParamMatrix::from_rows(rows)
    };
    let mut w = aug.cleared_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = ParamPoly::one();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col) per pivot
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot_row) = (rank..rows).find(|&i| !w[i][col].is_zero()) else {
            continue;
        };
        w.swap(rank, pivot_row);
        for i in rank + 1..rows {
            for j in col + 1..=cols {
                let cross = &(&w[rank][col] * &w[i][j]) - &(&w[i][col] * &w[rank][j]);
                w[i][j] = cross
                    .exact_div(&prev)
                    .expect("Bareiss cross-product is divisible by the previous pivot");
            }
            w[i][col] = ParamPoly::zero();
        }
        prev = w[rank][col].clone();
        pivots.push((rank, col));
        rank += 1;
    }
    // Inconsistency: a row of zero coefficients with nonzero right-hand side.
    for row in w.iter().skip(rank) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    // Back substitution, free variables pinned to zero.
    let mut x = vec![ParamRational::zero(); cols];
    for &(row, col) in pivots.iter().rev() {
        let mut acc = ParamRational::from_poly(w[row][cols].clone());
        for j in col + 1..cols {
            if !w[row][j].is_zero() && !x[j].is_zero() {
                acc = &acc - &(&ParamRational::from_poly(w[row][j].clone()) * &x[j]);
            }
        }
        x[col] = &acc / &ParamRational::from_poly(w[row][col].clone());
    }
    Some(x)
}

/// Multiplies `M x`, for checking solutions in tests and certificates.
pub fn mat_vec(m: &ParamMatrix, x: &[ParamRational]) -> Vec<ParamRational> {
    assert_eq!(x.len(), m.cols, "vector length mismatch");
    (0..m.rows)
        .map(|i| {
            let mut acc = ParamRational::zero();
            for j in 0..m.cols {
                if !m.at(i, j).is_zero() && !x[j].is_zero() {
                    acc = &acc + &(m.at(i, j) * &x[j]);
                }
            }
            acc
        })
        .collect()
}
