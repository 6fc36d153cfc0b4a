//! Dense rational matrices and exact elimination.

use std::fmt;

use num_traits::Zero;

use super::rational::{dot, zero, RatVector, Rational};
use crate::error::{Error, Result};

/// Row-major dense matrix with fixed dimensions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::from_integer(1.into());
        }
        m
    }

    pub fn from_rows(rows: Vec<RatVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`from_rows`](Self::from_rows) but keeps the column count when
    /// there are no rows.
    pub fn from_rows_with_cols(rows: Vec<RatVector>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: n,
            cols,
            data,
        })
    }

    /// Builds a `dim x columns.len()` matrix from column vectors.
    pub fn from_columns(dim: usize, columns: &[RatVector]) -> Result<Self> {
        let mut m = Self::zeros(dim, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: col.len(),
                });
            }
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    /// Outer product `u v^T`.
    pub fn outer(u: &[Rational], v: &[Rational]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, a) in u.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                m[(i, j)] = a * b;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RatVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<RatVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn columns(&self) -> Vec<RatVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Entries in row-major order.
    pub fn flatten(&self) -> RatVector {
        self.data.clone()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<RatVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if other.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<RatMatrix> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn add(&self, other: &RatMatrix) -> Result<RatMatrix> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(&self.row_vectors())
    }

    fn check_same_shape(&self, other: &RatMatrix) -> Result<()> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            f.write_str(&row.join(", "))?;
        }
        f.write_str("]")
    }
}

/// Reduced row echelon form in place. Returns the pivot columns.
pub fn rref(rows: &mut [RatVector]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_of_rows(rows: &[RatVector]) -> usize {
    let mut work = rows.to_vec();
    rref(&mut work).len()
}

/// Rank of the linear span of `points`.
pub fn affine_rank(points: &[RatVector]) -> Result<usize> {
    let Some(first) = points.first() else {
        return Err(Error::InvalidInput("rank of an empty point set".into()));
    };
    let dim = first.len();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.len(),
        });
    }
    Ok(rank_of_rows(points))
}

/// Basis of `{x : rows * x = 0}`, one vector per free column, in column order.
pub fn null_space(rows: &[RatVector], ncols: usize) -> Vec<RatVector> {
    let mut work = rows.to_vec();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![zero(); ncols];
            v[f] = Rational::from_integer(1.into());
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -work[r][f].clone();
            }
            v
        })
        .collect()
}

/// Solves the square system `a x = b`. `None` when `a` is singular.
pub fn solve_square(a: &[RatVector], b: &[Rational]) -> Option<RatVector> {
    let n = a.len();
    let mut aug: Vec<RatVector> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.last().is_some_and(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}

/// Inverse of a square matrix given by rows. `None` when singular.
pub fn inverse(a: &[RatVector]) -> Option<Vec<RatVector>> {
    let n = a.len();
    let mut aug: Vec<RatVector> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(super::rational::unit(n, i));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}
