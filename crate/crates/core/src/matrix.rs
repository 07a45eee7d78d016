//! Dense matrices over an exact field with reduced row echelon form.
//!
//! Everything downstream that needs a rank, a kernel or an image over a
//! field funnels through [`ExactMatrix::rref`]; keeping that single exact
//! pivoting routine well-tested is what makes the higher layers trustworthy.

use crate::error::{Error, Result};
use crate::field::{FieldKind, Scalar};
use std::ops::{Index, IndexMut};

/// Row-major dense matrix with all entries in one field.
/// Zero-row and zero-column shapes are legal and behave as expected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    field: FieldKind,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    /// Builds a matrix from row-major data, rejecting entries from a
    /// different field than `field`.
    pub fn new(field: FieldKind, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        for s in &data {
            if s.field() != field {
                return Err(Error::FieldMismatch(field, s.field()));
            }
        }
        Ok(ExactMatrix { field, rows, cols, data })
    }

    pub fn zero(field: FieldKind, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            field,
            rows,
            cols,
            data: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(field: FieldKind, n: usize) -> Self {
        let mut m = ExactMatrix::zero(field, n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one(field);
        }
        m
    }

    pub fn from_rows(field: FieldKind, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        ExactMatrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from integer literals, mostly for tests.
    pub fn from_i64_rows(field: FieldKind, rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&n| Scalar::from_i64(field, n)))
            .collect();
        ExactMatrix::new(field, rows.len(), rows.first().map_or(0, |r| r.len()), data)
            .expect("literal rows are rectangular")
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut out = ExactMatrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ExactMatrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = self[(i, k)].mul(&other[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&prod);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector length {} does not match {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero(self.field);
                for j in 0..self.cols {
                    acc = acc.add(&self[(i, j)].mul(&v[j]));
                }
                acc
            })
            .collect())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.rows != other.rows {
            return Err(Error::Shape("hstack with different row counts".into()));
        }
        let mut out = ExactMatrix::zero(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        Ok(out)
    }

    /// Vertical concatenation, `other` below `self`.
    pub fn vstack(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.cols != other.cols {
            return Err(Error::Shape("vstack with different column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        ExactMatrix::new(self.field, self.rows + other.rows, self.cols, data)
    }

    pub fn select_columns(&self, indices: &[usize]) -> ExactMatrix {
        let mut out = ExactMatrix::zero(self.field, self.rows, indices.len());
        for (jj, &j) in indices.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, jj)] = self[(i, j)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, c: &Scalar) {
        for j in 0..self.cols {
            self[(i, j)] = self[(i, j)].mul(c);
        }
    }

    /// `row_i -= c * row_k`.
    fn row_sub_scaled(&mut self, i: usize, k: usize, c: &Scalar) {
        for j in 0..self.cols {
            let delta = c.mul(&self[(k, j)]);
            self[(i, j)] = self[(i, j)].sub(&delta);
        }
    }

    /// Reduced row echelon form with pivot bookkeeping.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            m.scale_row(r, &inv);
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    m.row_sub_scaled(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { rank: r, pivots, reduced: m }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right kernel, one basis vector per column.
    /// For a matrix with no rows this is the identity on the column space.
    pub fn kernel_basis(&self) -> ExactMatrix {
        let Rref { pivots, reduced, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut out = ExactMatrix::zero(self.field, self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out[(f, k)] = Scalar::one(self.field);
            for (pi, &pc) in pivots.iter().enumerate() {
                out[(pc, k)] = reduced[(pi, f)].neg();
            }
        }
        out
    }

    /// Basis of the column space: the pivot columns of the original matrix.
    pub fn image_basis(&self) -> ExactMatrix {
        let Rref { pivots, .. } = self.rref();
        self.select_columns(&pivots)
    }

    /// Determinant by Gaussian elimination, tracking pivots and swap signs.
    pub fn det(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut acc = Scalar::one(self.field);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Scalar::zero(self.field));
            };
            if p != c {
                m.swap_rows(c, p);
                acc = acc.neg();
            }
            acc = acc.mul(&m[(c, c)]);
            let inv = m[(c, c)].inv().expect("pivot is nonzero");
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let f = m[(i, c)].mul(&inv);
                    m.row_sub_scaled(i, c, &f);
                }
            }
        }
        Ok(acc)
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Result of a reduced-row-echelon computation.
#[derive(Debug, Clone)]
pub struct Rref {
    pub rank: usize,
    /// Column index of the pivot in each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
    pub reduced: ExactMatrix,
}
