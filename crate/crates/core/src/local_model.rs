//! Matrix local model at the divisor `t = 0`: membership testing for the
//! locus of `n x n` matrices over `k[t]` with determinant `t^d` times a unit
//! and rank `n - d` modulo `t`, and the block factorization
//!
//! ```text
//! row ops:  M  ~>  [ I_{n-d}  P ]
//!                  [ 0      t Q ]      with Q invertible at t = 0,
//! ```
//!
//! computed by Gaussian elimination in the truncated ring `k[t]/(t^cap)`.
//! Pivot inverses are power series, so the ring is truncated high enough
//! that applying the inverse operations reproduces the input exactly.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::FieldKind;
use crate::ktpoly::{KtMatrix, KtPoly};
use crate::p1::{modify, FiberSubspace, SplitType};

/// An `n x n` matrix of polynomials with a declared vanishing order `d`
/// for its determinant.
#[derive(Debug, Clone)]
pub struct MatrixOverKt {
    d: usize,
    mat: KtMatrix,
}

impl MatrixOverKt {
    pub fn new(d: usize, mat: KtMatrix) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::Shape("local model matrices are square".into()));
        }
        if d > mat.rows() {
            return Err(Error::Invalid(format!(
                "vanishing order {d} exceeds matrix size {}",
                mat.rows()
            )));
        }
        Ok(MatrixOverKt { d, mat })
    }

    pub fn size(&self) -> usize {
        self.mat.rows()
    }

    pub fn order(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &KtMatrix {
        &self.mat
    }

    pub fn max_entry_degree(&self) -> usize {
        let mut out = 0;
        for i in 0..self.mat.rows() {
            for j in 0..self.mat.cols() {
                out = out.max(self.mat[(i, j)].degree().unwrap_or(0));
            }
        }
        out
    }

    /// Truncation level for factorization arithmetic, high enough that no
    /// coefficient of the input or its determinant is lost.
    pub fn cap(&self) -> usize {
        (2 * self.size() * self.max_entry_degree()).max(self.d + 2).max(4)
    }

    /// Schema: `{"d": order, "entries": [[coeffs, ...], ...]}` with each
    /// entry an ascending coefficient array.
    pub fn from_json(field: FieldKind, v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Json("expected an object with d and entries".into()))?;
        let d = obj
            .get("d")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("missing nonnegative integer field d".into()))?
            as usize;
        let rows = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("missing entries array".into()))?;
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Json("entries rows must be arrays".into()))?;
            if row.len() != n {
                return Err(Error::Shape(format!(
                    "expected {n} columns per row, found {}",
                    row.len()
                )));
            }
            for entry in row {
                let coeffs = entry
                    .as_array()
                    .ok_or_else(|| Error::Json("matrix entries are coefficient arrays".into()))?
                    .iter()
                    .map(|c| crate::field::Scalar::from_json(field, c))
                    .collect::<Result<Vec<_>>>()?;
                data.push(KtPoly::from_coeffs(field, coeffs)?);
            }
        }
        MatrixOverKt::new(d, KtMatrix::new(field, n, n, data)?)
    }

    pub fn to_json(&self) -> Value {
        let n = self.size();
        let entries: Vec<Value> = (0..n)
            .map(|i| {
                Value::Array(
                    (0..n)
                        .map(|j| {
                            Value::Array(
                                self.mat[(i, j)]
                                    .coeffs()
                                    .iter()
                                    .map(|c| c.to_json())
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect();
        json!({ "d": self.d, "entries": entries })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipReport {
    pub det_ok: bool,
    pub det_valuation: Option<usize>,
    pub rank_mod_t: usize,
    pub member: bool,
}

/// Membership in the local model: the determinant must be exactly
/// `t^d * unit` and the reduction mod `t` must have rank `n - d`.
pub fn check_point(m: &MatrixOverKt) -> Result<MembershipReport> {
    let det = m.mat.det()?;
    let det_valuation = det.valuation();
    let det_ok = det_valuation == Some(m.d);
    let rank_mod_t = m.mat.constant_term_matrix().rank();
    let member = det_ok && rank_mod_t == m.size() - m.d;
    Ok(MembershipReport { det_ok, det_valuation, rank_mod_t, member })
}

/// One elementary row operation in the truncated ring.
#[derive(Debug, Clone)]
pub enum RowOp {
    Swap { a: usize, b: usize },
    /// Row scaled by `unit`, a power series invertible at `t = 0`.
    Scale { row: usize, unit: KtPoly },
    /// `row dst += coeff * row src`.
    AddMul { dst: usize, src: usize, coeff: KtPoly },
}

impl RowOp {
    fn apply(&self, m: &mut KtMatrix, cap: usize) {
        match self {
            RowOp::Swap { a, b } => {
                for j in 0..m.cols() {
                    let tmp = m[(*a, j)].clone();
                    m[(*a, j)] = m[(*b, j)].clone();
                    m[(*b, j)] = tmp;
                }
            }
            RowOp::Scale { row, unit } => {
                for j in 0..m.cols() {
                    m[(*row, j)] = m[(*row, j)].mul(unit).truncate(cap);
                }
            }
            RowOp::AddMul { dst, src, coeff } => {
                for j in 0..m.cols() {
                    let add = coeff.mul(&m[(*src, j)]).truncate(cap);
                    m[(*dst, j)] = m[(*dst, j)].add(&add).truncate(cap);
                }
            }
        }
    }

    fn inverse(&self, cap: usize) -> RowOp {
        match self {
            RowOp::Swap { a, b } => RowOp::Swap { a: *a, b: *b },
            RowOp::Scale { row, unit } => RowOp::Scale {
                row: *row,
                unit: unit.inv_truncated(cap).expect("scale factors are units"),
            },
            RowOp::AddMul { dst, src, coeff } => {
                RowOp::AddMul { dst: *dst, src: *src, coeff: coeff.neg() }
            }
        }
    }

    /// Determinant of the corresponding elementary matrix.
    fn det_factor(&self, field: FieldKind) -> KtPoly {
        match self {
            RowOp::Swap { .. } => KtPoly::constant(crate::field::Scalar::from_i64(field, -1)),
            RowOp::Scale { unit, .. } => unit.clone(),
            RowOp::AddMul { .. } => KtPoly::one(field),
        }
    }
}

/// Result of reducing a member matrix to `[[I, P], [0, tQ]]` form, after
/// an optional column permutation selecting the chart.
#[derive(Debug, Clone)]
pub struct BlockFactorization {
    pub col_perm: Vec<usize>,
    pub row_ops: Vec<RowOp>,
    pub p_block: KtMatrix,
    pub q_block: KtMatrix,
    pub cap: usize,
}

impl BlockFactorization {
    /// The reduced form `[[I_{n-d}, P], [0, t Q]]`.
    pub fn block_form(&self) -> KtMatrix {
        let field = self.p_block.field();
        let k = self.p_block.rows();
        let d = self.q_block.rows();
        let n = k + d;
        let mut out = KtMatrix::zero(field, n, n);
        for i in 0..k {
            out[(i, i)] = KtPoly::one(field);
            for j in 0..d {
                out[(i, k + j)] = self.p_block[(i, j)].clone();
            }
        }
        let t = KtPoly::t(field);
        for i in 0..d {
            for j in 0..d {
                out[(k + i, k + j)] = t.mul(&self.q_block[(i, j)]).truncate(self.cap);
            }
        }
        out
    }

    /// Undoes the row operations and the column permutation. For a member
    /// matrix whose entry degrees stay below the truncation level this
    /// returns the original matrix exactly.
    pub fn reconstruct(&self) -> KtMatrix {
        let mut m = self.block_form();
        for op in self.row_ops.iter().rev() {
            op.inverse(self.cap).apply(&mut m, self.cap);
        }
        let n = m.rows();
        let mut out = KtMatrix::zero(m.field(), n, n);
        for j in 0..n {
            for i in 0..n {
                out[(i, self.col_perm[j])] = m[(i, j)].clone();
            }
        }
        out
    }

    /// Verifies `det(M) * sgn(perm) * (product of op determinants)
    /// = t^d * det(Q)` in the truncated ring, one degree short of the cap
    /// so the shifted `Q` entries are fully determined.
    pub fn det_identity_holds(&self, m: &MatrixOverKt) -> Result<bool> {
        let field = self.p_block.field();
        let check = self.cap - 1;
        let mut lhs = m.mat.det()?;
        if permutation_sign(&self.col_perm) < 0 {
            lhs = lhs.neg();
        }
        for op in &self.row_ops {
            lhs = lhs.mul(&op.det_factor(field)).truncate(check);
        }
        let rhs = KtPoly::monomial(crate::field::Scalar::one(field), m.d)
            .mul(&self.q_block.det()?)
            .truncate(check);
        Ok(lhs.truncate(check) == rhs)
    }
}

fn permutation_sign(perm: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn validate_perm(n: usize, perm: &[usize]) -> Result<()> {
    if perm.len() != n {
        return Err(Error::Invalid(format!(
            "permutation length {} does not match size {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::Invalid("not a permutation".into()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// A column order putting a maximal independent-mod-t set first: the pivot
/// columns of the reduction mod `t`, then the rest. For a member matrix the
/// resulting permutation always satisfies the chart condition.
pub fn suggest_chart(m: &MatrixOverKt) -> Vec<usize> {
    let rref = m.matrix().constant_term_matrix().rref();
    let mut perm = rref.pivots.clone();
    for j in 0..m.size() {
        if !perm.contains(&j) {
            perm.push(j);
        }
    }
    perm
}

/// Reduces a member matrix to block form on the chart where its first
/// `n - d` columns (after the optional permutation) are independent mod `t`.
pub fn factor(m: &MatrixOverKt, col_perm: Option<&[usize]>) -> Result<BlockFactorization> {
    let report = check_point(m)?;
    if !report.member {
        return Err(Error::Invalid(format!(
            "not a point of the local model: determinant valuation {:?}, rank mod t {}",
            report.det_valuation, report.rank_mod_t
        )));
    }
    let n = m.size();
    let d = m.d;
    let k = n - d;
    let field = m.mat.field();
    let cap = m.cap();

    let perm: Vec<usize> = match col_perm {
        Some(p) => {
            validate_perm(n, p)?;
            p.to_vec()
        }
        None => (0..n).collect(),
    };
    let mut work = KtMatrix::zero(field, n, n);
    for j in 0..n {
        for i in 0..n {
            work[(i, j)] = m.mat[(i, perm[j])].clone();
        }
    }
    if work.constant_term_matrix().select_columns(&(0..k).collect::<Vec<_>>()).rank() != k {
        return Err(Error::ChartFailure(format!(
            "first {k} columns are dependent mod t under permutation {perm:?}"
        )));
    }

    let mut ops = Vec::new();
    for j in 0..k {
        let pivot_row = (j..n)
            .find(|&i| !work[(i, j)].coeff(0).is_zero())
            .expect("chart condition guarantees a unit pivot");
        if pivot_row != j {
            let op = RowOp::Swap { a: j, b: pivot_row };
            op.apply(&mut work, cap);
            ops.push(op);
        }
        let pivot = work[(j, j)].clone();
        if pivot != KtPoly::one(field) {
            let op = RowOp::Scale { row: j, unit: pivot.inv_truncated(cap)? };
            op.apply(&mut work, cap);
            ops.push(op);
        }
        for i in 0..n {
            if i == j || work[(i, j)].is_zero() {
                continue;
            }
            let op = RowOp::AddMul { dst: i, src: j, coeff: work[(i, j)].neg() };
            op.apply(&mut work, cap);
            ops.push(op);
        }
    }

    let mut p_block = KtMatrix::zero(field, k, d);
    for i in 0..k {
        for j in 0..d {
            p_block[(i, j)] = work[(i, k + j)].clone();
        }
    }
    let mut q_block = KtMatrix::zero(field, d, d);
    for i in 0..d {
        for j in 0..d {
            let entry = &work[(k + i, k + j)];
            assert!(
                entry.coeff(0).is_zero(),
                "lower-right block of a member matrix is divisible by t"
            );
            let shifted: Vec<_> = entry.coeffs().iter().skip(1).cloned().collect();
            q_block[(i, j)] = KtPoly::from_coeffs(field, shifted)?;
        }
    }
    if d > 0 {
        let det0 = q_block.constant_term_matrix().det()?;
        assert!(!det0.is_zero(), "det Q must be a unit at t = 0 for a member matrix");
    }

    let out = BlockFactorization { col_perm: perm, row_ops: ops, p_block, q_block, cap };
    assert_eq!(out.reconstruct(), m.mat, "truncation cap was exceeded");
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ModificationBalance {
    pub original: SplitType,
    pub modified: SplitType,
    pub codim: usize,
    pub balanced: bool,
}

/// Degree bookkeeping of an elementary modification: the drop in degree
/// must equal the codimension of the retained subspace of the fiber.
pub fn modification_degree_check(
    e: &SplitType,
    f: &FiberSubspace,
) -> Result<ModificationBalance> {
    let modified = modify(e, f)?;
    let codim = e.rank() - f.dim();
    let balanced = e.degree() - modified.degree() == codim as i64;
    Ok(ModificationBalance { original: e.clone(), modified, codim, balanced })
}
