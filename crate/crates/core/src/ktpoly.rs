//! Univariate polynomials over an exact field, written in the variable `t`,
//! together with matrices over `k[t]` and their Smith normal form.
//!
//! `k[t]` is Euclidean, so the Smith form needs nothing beyond polynomial
//! division. Invariant factors are normalized monic; unit invariants are kept
//! as the constant 1 so the count of nonzero invariants equals the rank over
//! the fraction field `k(t)`.

use crate::error::{Error, Result};
use crate::field::{FieldKind, Scalar};
use std::fmt;
use std::ops::{Index, IndexMut};

/// Polynomial in `t` with ascending coefficients and no trailing zeros;
/// the zero polynomial is the empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KtPoly {
    field: FieldKind,
    coeffs: Vec<Scalar>,
}

impl KtPoly {
    pub fn zero(field: FieldKind) -> Self {
        KtPoly { field, coeffs: Vec::new() }
    }

    pub fn one(field: FieldKind) -> Self {
        KtPoly::constant(Scalar::one(field))
    }

    pub fn constant(c: Scalar) -> Self {
        let field = c.field();
        let mut p = KtPoly { field, coeffs: vec![c] };
        p.trim();
        p
    }

    /// `c * t^k`.
    pub fn monomial(c: Scalar, k: usize) -> Self {
        let field = c.field();
        if c.is_zero() {
            return KtPoly::zero(field);
        }
        let mut coeffs = vec![Scalar::zero(field); k + 1];
        coeffs[k] = c;
        KtPoly { field, coeffs }
    }

    pub fn t(field: FieldKind) -> Self {
        KtPoly::monomial(Scalar::one(field), 1)
    }

    pub fn from_coeffs(field: FieldKind, coeffs: Vec<Scalar>) -> Result<Self> {
        for c in &coeffs {
            if c.field() != field {
                return Err(Error::FieldMismatch(field, c.field()));
            }
        }
        let mut p = KtPoly { field, coeffs };
        p.trim();
        Ok(p)
    }

    pub fn from_i64_coeffs(field: FieldKind, coeffs: &[i64]) -> Self {
        let cs = coeffs.iter().map(|&n| Scalar::from_i64(field, n)).collect();
        KtPoly::from_coeffs(field, cs).expect("coefficients built in-field")
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    /// Unit in `k[t]`: a nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn add(&self, other: &KtPoly) -> KtPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect();
        let mut p = KtPoly { field: self.field, coeffs };
        p.trim();
        p
    }

    pub fn neg(&self) -> KtPoly {
        KtPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn sub(&self, other: &KtPoly) -> KtPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &KtPoly) -> KtPoly {
        if self.is_zero() || other.is_zero() {
            return KtPoly::zero(self.field);
        }
        let mut coeffs =
            vec![Scalar::zero(self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        let mut p = KtPoly { field: self.field, coeffs };
        p.trim();
        p
    }

    pub fn mul_scalar(&self, c: &Scalar) -> KtPoly {
        let mut p = KtPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        };
        p.trim();
        p
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &KtPoly) -> Result<(KtPoly, KtPoly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lead_inv = d.leading().expect("nonzero divisor").inv()?;
        let dd = d.coeffs.len() - 1;
        let mut rem = self.clone();
        let mut q = vec![Scalar::zero(self.field); self.coeffs.len().saturating_sub(dd)];
        while !rem.is_zero() && rem.coeffs.len() > dd {
            let shift = rem.coeffs.len() - 1 - dd;
            let c = rem.leading().expect("nonzero remainder").mul(&lead_inv);
            for (j, b) in d.coeffs.iter().enumerate() {
                let delta = c.mul(b);
                rem.coeffs[shift + j] = rem.coeffs[shift + j].sub(&delta);
            }
            rem.trim();
            q[shift] = c;
        }
        Ok((
            KtPoly::from_coeffs(self.field, q).expect("quotient in-field"),
            rem,
        ))
    }

    pub fn divides(&self, other: &KtPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divrem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    pub fn make_monic(&self) -> KtPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.mul_scalar(&l.inv().expect("leading coefficient is nonzero")),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &KtPoly) -> KtPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn evaluate(&self, at: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(at).add(c);
        }
        acc
    }

    /// Drops all coefficients of `t^k` with `k >= cap`.
    pub fn truncate(&self, cap: usize) -> KtPoly {
        let mut p = KtPoly {
            field: self.field,
            coeffs: self.coeffs.iter().take(cap).cloned().collect(),
        };
        p.trim();
        p
    }

    /// Power-series inverse mod `t^cap`; the constant term must be nonzero.
    pub fn inv_truncated(&self, cap: usize) -> Result<KtPoly> {
        let c0 = self.coeff(0);
        let c0_inv = c0.inv().map_err(|_| {
            Error::Invalid("inverse requested for a polynomial divisible by t".into())
        })?;
        let mut inv = vec![Scalar::zero(self.field); cap];
        if cap == 0 {
            return Ok(KtPoly::zero(self.field));
        }
        inv[0] = c0_inv.clone();
        for k in 1..cap {
            // c0 * inv[k] + sum_{j=1..=k} coeff(j) * inv[k-j] = 0
            let mut acc = Scalar::zero(self.field);
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                acc = acc.add(&self.coeff(j).mul(&inv[k - j]));
            }
            inv[k] = acc.neg().mul(&c0_inv);
        }
        KtPoly::from_coeffs(self.field, inv)
    }
}

impl fmt::Display for KtPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "t")?,
                1 => write!(f, "{c}*t")?,
                _ if c.is_one() => write!(f, "t^{k}")?,
                _ => write!(f, "{c}*t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Dense matrix over `k[t]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KtMatrix {
    field: FieldKind,
    rows: usize,
    cols: usize,
    data: Vec<KtPoly>,
}

impl KtMatrix {
    pub fn new(field: FieldKind, rows: usize, cols: usize, data: Vec<KtPoly>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        for p in &data {
            if p.field() != field {
                return Err(Error::FieldMismatch(field, p.field()));
            }
        }
        Ok(KtMatrix { field, rows, cols, data })
    }

    pub fn zero(field: FieldKind, rows: usize, cols: usize) -> Self {
        KtMatrix {
            field,
            rows,
            cols,
            data: vec![KtPoly::zero(field); rows * cols],
        }
    }

    pub fn identity(field: FieldKind, n: usize) -> Self {
        let mut m = KtMatrix::zero(field, n, n);
        for i in 0..n {
            m[(i, i)] = KtPoly::one(field);
        }
        m
    }

    pub fn diagonal(field: FieldKind, entries: &[KtPoly]) -> Self {
        let n = entries.len();
        let mut m = KtMatrix::zero(field, n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
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
        self.data.iter().all(KtPoly::is_zero)
    }

    pub fn mul(&self, other: &KtMatrix) -> Result<KtMatrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = KtMatrix::zero(self.field, self.rows, other.cols);
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

    pub fn neg(&self) -> KtMatrix {
        let data = self.data.iter().map(KtPoly::neg).collect();
        KtMatrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &KtMatrix) -> Result<KtMatrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.rows != other.rows {
            return Err(Error::Shape("hstack needs equal row counts".into()));
        }
        let mut out = KtMatrix::zero(self.field, self.rows, self.cols + other.cols);
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

    pub fn vstack(&self, other: &KtMatrix) -> Result<KtMatrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.cols != other.cols {
            return Err(Error::Shape("vstack needs equal column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(KtMatrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Kronecker product; block `(i, j)` of the result is `self[i][j] * other`.
    pub fn kronecker(&self, other: &KtMatrix) -> KtMatrix {
        let mut out = KtMatrix::zero(
            self.field,
            self.rows * other.rows,
            self.cols * other.cols,
        );
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self[(i, j)].is_zero() {
                    continue;
                }
                for a in 0..other.rows {
                    for b in 0..other.cols {
                        out[(i * other.rows + a, j * other.cols + b)] =
                            self[(i, j)].mul(&other[(a, b)]);
                    }
                }
            }
        }
        out
    }

    /// Entrywise reduction mod `t`: the matrix of constant terms.
    pub fn constant_term_matrix(&self) -> crate::matrix::ExactMatrix {
        let data = self.data.iter().map(|p| p.coeff(0)).collect();
        crate::matrix::ExactMatrix::new(self.field, self.rows, self.cols, data)
            .expect("constant terms stay in-field")
    }

    /// Determinant by expansion over column subsets; exact over `k[t]`.
    pub fn det(&self) -> Result<KtPoly> {
        if self.rows != self.cols {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(KtPoly::one(self.field));
        }
        // dp over subsets of used columns, processing rows top to bottom
        let mut dp = vec![KtPoly::zero(self.field); 1 << n];
        dp[0] = KtPoly::one(self.field);
        for mask in 0..(1usize << n) {
            if dp[mask].is_zero() {
                continue;
            }
            let i = mask.count_ones() as usize;
            if i == n {
                continue;
            }
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    continue;
                }
                // Placing row i in column j adds one inversion per used
                // column above j, hence the sign.
                let used_above = (mask >> (j + 1)).count_ones();
                let term = dp[mask].mul(&self[(i, j)]);
                let term = if used_above % 2 == 1 { term.neg() } else { term };
                dp[mask | (1 << j)] = dp[mask | (1 << j)].add(&term);
            }
        }
        Ok(dp[(1 << n) - 1].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row_i -= q * row_k`.
    fn row_sub_scaled(&mut self, i: usize, k: usize, q: &KtPoly) {
        for j in 0..self.cols {
            let delta = q.mul(&self[(k, j)]);
            self[(i, j)] = self[(i, j)].sub(&delta);
        }
    }

    /// `col_j -= q * col_k`.
    fn col_sub_scaled(&mut self, j: usize, k: usize, q: &KtPoly) {
        for i in 0..self.rows {
            let delta = q.mul(&self[(i, k)]);
            self[(i, j)] = self[(i, j)].sub(&delta);
        }
    }

    /// `row_i += row_k`.
    fn row_add(&mut self, i: usize, k: usize) {
        for j in 0..self.cols {
            self[(i, j)] = self[(i, j)].add(&self[(k, j)]);
        }
    }

    fn scale_col(&mut self, j: usize, c: &Scalar) {
        for i in 0..self.rows {
            self[(i, j)] = self[(i, j)].mul_scalar(c);
        }
    }
}

impl Index<(usize, usize)> for KtMatrix {
    type Output = KtPoly;

    fn index(&self, (i, j): (usize, usize)) -> &KtPoly {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for KtMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut KtPoly {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form data. `diagonal` has length `min(rows, cols)` and
/// satisfies the divisibility chain `d_1 | d_2 | ...`, each entry monic or
/// zero. `v` and `v_inv` record the accumulated column operations, so
/// `m * v` has zero columns exactly where `diagonal` vanishes (or past its
/// end), and those columns of `v` form a saturated basis of `ker m`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub diagonal: Vec<KtPoly>,
    pub v: KtMatrix,
    pub v_inv: KtMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Nonzero invariant factors, including unit invariants as constant 1.
    pub fn invariants(&self) -> Vec<KtPoly> {
        self.diagonal.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    /// Column indices of `v` spanning the kernel of the original matrix.
    pub fn kernel_columns(&self, cols: usize) -> Vec<usize> {
        (0..cols)
            .filter(|&j| j >= self.diagonal.len() || self.diagonal[j].is_zero())
            .collect()
    }
}

/// Smith normal form over `k[t]` by Euclidean elimination.
///
/// Algorithm: pick a minimal-degree nonzero entry as pivot, clear its row and
/// column by division with remainder (remainders strictly drop the pivot
/// degree, so this terminates), then fold any entry the pivot fails to divide
/// into the pivot row and repeat. Column operations are mirrored into `v`
/// and inverted into `v_inv`.
pub fn snf(m: &KtMatrix) -> Snf {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut v = KtMatrix::identity(a.field, cols);
    let mut v_inv = KtMatrix::identity(a.field, cols);
    let steps = rows.min(cols);

    // col_j -= q * col_k on a, mirrored on v; inverse op applied to v_inv.
    // a * (I - q E_{kj}) keeps a*v invariant as a product with m.
    for t in 0..steps {
        loop {
            let Some((pi, pj)) = min_degree_entry(&a, t) else {
                // Remaining submatrix is zero; done.
                return finish(a, v, v_inv, steps);
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let (q, r) = a[(i, t)].divrem(&a[(t, t)]).expect("pivot nonzero");
                a.row_sub_scaled(i, t, &q);
                if !r.is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let (q, r) = a[(t, j)].divrem(&a[(t, t)]).expect("pivot nonzero");
                a.col_sub_scaled(j, t, &q);
                v.col_sub_scaled(j, t, &q);
                // (I - q E_{tj})^{-1} = I + q E_{tj}: row_t += q * row_j on v_inv
                let neg_q = q.neg();
                v_inv.row_sub_scaled(t, j, &neg_q);
                if !r.is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Row and column of the pivot are clear; enforce divisibility of
            // the remaining submatrix before moving on.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(t, t)].divides(&a[(i, j)]));
            match offender {
                Some((i, _)) => {
                    a.row_add(t, i);
                }
                None => break,
            }
        }
    }
    finish(a, v, v_inv, steps)
}

fn finish(mut a: KtMatrix, mut v: KtMatrix, mut v_inv: KtMatrix, steps: usize) -> Snf {
    let mut diagonal = Vec::with_capacity(steps);
    for t in 0..steps {
        let d = a[(t, t)].clone();
        if let Some(lead) = d.leading() {
            if !lead.is_one() {
                let inv = lead.inv().expect("leading coefficient nonzero");
                a.scale_col(t, &inv);
                v.scale_col(t, &inv);
                let lead = lead.clone();
                for j in 0..v_inv.cols {
                    v_inv[(t, j)] = v_inv[(t, j)].mul_scalar(&lead);
                }
            }
        }
        diagonal.push(a[(t, t)].clone());
    }
    Snf { diagonal, v, v_inv }
}

fn min_degree_entry(a: &KtMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for i in from..a.rows {
        for j in from..a.cols {
            if let Some(d) = a[(i, j)].degree() {
                if best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((i, j, d));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Nonzero invariant factors of `m`, monic, in divisibility order.
pub fn invariant_factors(m: &KtMatrix) -> Vec<KtPoly> {
    snf(m).invariants()
}
