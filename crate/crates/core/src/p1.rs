//! Splitting types, cohomology, kernels, and elementary modifications of
//! vector bundles on the projective line, in exact arithmetic.
//!
//! Every bundle here is a direct sum of line bundles `⊕ O(c_l)`, recorded by
//! its multiset of twists. Maps between split bundles are matrices of
//! homogeneous binary forms. The central algorithm recovers the splitting
//! type of a kernel (or of an elementary modification) from the section
//! counts of its twists: once `h^0` is known for enough twists `m`, the
//! first differences `Δ(m) = h^0(m) - h^0(m-1) = #{l : c_l ≥ -m}` reveal the
//! multiset `{c_l}` one increment at a time.

use crate::error::{Error, Result};
use crate::field::{FieldKind, Scalar};
use crate::forms::{BinaryForm, MultiPoly};
use crate::ktpoly;
use crate::matrix::ExactMatrix;
use crate::rng::SplitMix64;
use std::collections::BTreeMap;
use std::fmt;

/// Splitting type `⊕ O(c_l)`: twists sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SplitType {
    twists: Vec<i64>,
}

impl SplitType {
    pub fn new(mut twists: Vec<i64>) -> Self {
        twists.sort_unstable_by(|a, b| b.cmp(a));
        SplitType { twists }
    }

    pub fn empty() -> Self {
        SplitType { twists: Vec::new() }
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn degree(&self) -> i64 {
        self.twists.iter().sum()
    }

    /// `h^0(⊕O(c_l)(m)) = Σ max(0, c_l + m + 1)`.
    pub fn h0_twist(&self, m: i64) -> u64 {
        self.twists
            .iter()
            .map(|&c| (c + m + 1).max(0) as u64)
            .sum()
    }

    /// `h^1(⊕O(c_l)(m)) = Σ max(0, -c_l - m - 1)`.
    pub fn h1_twist(&self, m: i64) -> u64 {
        self.twists
            .iter()
            .map(|&c| (-c - m - 1).max(0) as u64)
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.twists)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<SplitType> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Invalid(format!("expected twist array, found {v}")))?;
        let twists = arr
            .iter()
            .map(|t| {
                t.as_i64()
                    .ok_or_else(|| Error::Invalid(format!("non-integer twist {t}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SplitType::new(twists))
    }
}

impl fmt::Display for SplitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.twists.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// A map `⊕O(a_i) → ⊕O(b_j)` of split bundles: entry `(j, i)` is a form of
/// degree `b_j - a_i`, or zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    field: FieldKind,
    source: SplitType,
    target: SplitType,
    /// Row-major: `entries[j][i]` maps summand `i` of the source into
    /// summand `j` of the target.
    entries: Vec<Vec<BinaryForm>>,
}

impl GradedMap {
    pub fn new(
        field: FieldKind,
        source: SplitType,
        target: SplitType,
        entries: Vec<Vec<BinaryForm>>,
    ) -> Result<Self> {
        if entries.len() != target.rank()
            || entries.iter().any(|row| row.len() != source.rank())
        {
            return Err(Error::Shape(format!(
                "entry matrix must be {}x{}",
                target.rank(),
                source.rank()
            )));
        }
        for (j, row) in entries.iter().enumerate() {
            for (i, e) in row.iter().enumerate() {
                if e.field() != field {
                    return Err(Error::FieldMismatch(field, e.field()));
                }
                if let Some(deg) = e.degree() {
                    let want = target.twists()[j] - source.twists()[i];
                    if want < 0 || deg as i64 != want {
                        return Err(Error::Degree(format!(
                            "entry ({j}, {i}) has degree {deg}, expected {want}"
                        )));
                    }
                }
            }
        }
        Ok(GradedMap { field, source, target, entries })
    }

    /// A single row of forms `⊕O(a_i) → O(b)`.
    pub fn row(field: FieldKind, source: SplitType, b: i64, forms: Vec<BinaryForm>) -> Result<Self> {
        GradedMap::new(field, source, SplitType::new(vec![b]), vec![forms])
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn source(&self) -> &SplitType {
        &self.source
    }

    pub fn target(&self) -> &SplitType {
        &self.target
    }

    pub fn entry(&self, j: usize, i: usize) -> &BinaryForm {
        &self.entries[j][i]
    }

    /// Schema: `{"source": twists, "target": twists, "entries": [[coeffs]]}`
    /// with `entries[j][i]` the coefficient array of the form mapping source
    /// summand `i` into target summand `j`.
    pub fn from_json(field: FieldKind, v: &serde_json::Value) -> Result<GradedMap> {
        let obj = v.as_object().ok_or_else(|| {
            Error::Json("expected an object with source, target, entries".into())
        })?;
        let source = SplitType::from_json(
            obj.get("source").ok_or_else(|| Error::Json("missing source".into()))?,
        )?;
        let target = SplitType::from_json(
            obj.get("target").ok_or_else(|| Error::Json("missing target".into()))?,
        )?;
        let rows = obj
            .get("entries")
            .and_then(|e| e.as_array())
            .ok_or_else(|| Error::Json("missing entries array".into()))?;
        let entries = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Json("entries rows must be arrays".into()))?
                    .iter()
                    .map(|e| BinaryForm::from_json(field, e))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GradedMap::new(field, source, target, entries)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "entries": self
                .entries
                .iter()
                .map(|row| row.iter().map(BinaryForm::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    /// Rank at the generic point of the line. Dehomogenizing at `y = 1`
    /// commutes with all minors because each minor is homogeneous, so this
    /// is the rank of the entry matrix over `k(t)`.
    pub fn generic_rank(&self) -> usize {
        let data = self
            .entries
            .iter()
            .flat_map(|row| row.iter().map(BinaryForm::dehomogenize))
            .collect();
        let m = ktpoly::KtMatrix::new(self.field, self.target.rank(), self.source.rank(), data)
            .expect("entries stay in-field");
        ktpoly::invariant_factors(&m).len()
    }

    /// True when the map is surjective on every fiber: the maximal minors
    /// have no common projective zero, i.e. their gcd is a nonzero constant.
    pub fn is_fiberwise_surjective(&self) -> bool {
        let tau = self.target.rank();
        if tau > self.source.rank() {
            return false;
        }
        let mut g = BinaryForm::zero(self.field);
        for cols in subsets(self.source.rank(), tau) {
            let minor = self.minor(&(0..tau).collect::<Vec<_>>(), &cols);
            if minor.is_zero() {
                continue;
            }
            g = g.gcd(&minor).expect("same field");
            if g.degree() == Some(0) {
                return true;
            }
        }
        // All minors zero (generic rank below target rank) or a common root.
        false
    }

    /// Determinant of the square submatrix on `rows` x `cols`, by Laplace
    /// expansion along the first row.
    fn minor(&self, rows: &[usize], cols: &[usize]) -> BinaryForm {
        debug_assert_eq!(rows.len(), cols.len());
        if rows.is_empty() {
            return BinaryForm::constant(Scalar::one(self.field));
        }
        let mut acc = BinaryForm::zero(self.field);
        let rest_rows = &rows[1..];
        for (k, &c) in cols.iter().enumerate() {
            let e = &self.entries[rows[0]][c];
            if e.is_zero() {
                continue;
            }
            let rest_cols: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|&(kk, _)| kk != k)
                .map(|(_, &cc)| cc)
                .collect();
            let sub = self.minor(rest_rows, &rest_cols);
            let term = e.mul(&sub);
            let term = if k % 2 == 1 { term.neg() } else { term };
            acc = match acc.add(&term) {
                Ok(s) => s,
                Err(_) => unreachable!("minor terms share a degree"),
            };
        }
        acc
    }

    /// Matrix of the induced linear map on global sections of twist `m`:
    /// `⊕ H^0(O(a_i + m)) → ⊕ H^0(O(b_j + m))`, in the monomial bases
    /// `x^(deg-k) y^k`.
    fn graded_piece_matrix(&self, m: i64) -> ExactMatrix {
        let src_dims: Vec<usize> = self
            .source
            .twists()
            .iter()
            .map(|&a| (a + m + 1).max(0) as usize)
            .collect();
        let tgt_dims: Vec<usize> = self
            .target
            .twists()
            .iter()
            .map(|&b| (b + m + 1).max(0) as usize)
            .collect();
        let rows: usize = tgt_dims.iter().sum();
        let cols: usize = src_dims.iter().sum();
        let mut mat = ExactMatrix::zero(self.field, rows, cols);
        let src_off = offsets(&src_dims);
        let tgt_off = offsets(&tgt_dims);
        for (j, row) in self.entries.iter().enumerate() {
            for (i, e) in row.iter().enumerate() {
                if e.is_zero() || src_dims[i] == 0 {
                    continue;
                }
                // e = Σ_u c_u x^(deg-u) y^u multiplies the basis monomial
                // indexed by k into monomials indexed by k + u.
                for k in 0..src_dims[i] {
                    for (u, c) in e.coeffs().iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let out = k + u;
                        if out < tgt_dims[j] {
                            let r = tgt_off[j] + out;
                            let col = src_off[i] + k;
                            mat[(r, col)] = mat[(r, col)].add(c);
                        }
                    }
                }
            }
        }
        mat
    }

    /// `h^0` of the kernel sheaf in twist `m`, by left-exactness of global
    /// sections.
    pub fn kernel_h0(&self, m: i64) -> u64 {
        let mat = self.graded_piece_matrix(m);
        (mat.cols() - mat.rank()) as u64
    }

    /// Splitting type of the kernel bundle.
    pub fn kernel_split_type(&self) -> Result<SplitType> {
        let kernel_rank = self.source.rank() - self.generic_rank();
        let m0 = -self.source.twists().iter().copied().max().unwrap_or(0) - 1;
        let total_coeffs: usize = self
            .entries
            .iter()
            .flat_map(|row| row.iter().map(|e| e.coeffs().len().max(1)))
            .sum();
        let cap = m0 + 10 * total_coeffs.max(1) as i64 + 10;
        reconstruct_from_h0(kernel_rank, m0, cap, |m| self.kernel_h0(m))
    }
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    dims.iter()
        .map(|&d| {
            let o = acc;
            acc += d;
            o
        })
        .collect()
}

/// All size-`k` subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Recovers a splitting type from its section counts. `h0(m)` must be the
/// section count of a rank-`rank` split bundle at twist `m`, with `h0(m0)=0`.
/// The first difference `Δ(m) = #{l : c_l ≥ -m}` climbs from 0 to `rank`;
/// each increment of `Δ` at `m` contributes twists `-m`.
fn reconstruct_from_h0(
    rank: usize,
    m0: i64,
    cap: i64,
    h0: impl Fn(i64) -> u64,
) -> Result<SplitType> {
    debug_assert_eq!(h0(m0), 0, "scan must start below every twist");
    if rank == 0 {
        return Ok(SplitType::empty());
    }
    let mut twists = Vec::with_capacity(rank);
    let mut prev_h0 = 0u64;
    let mut prev_delta = 0u64;
    let mut m = m0;
    loop {
        m += 1;
        if m > cap {
            return Err(Error::ScanCapExceeded { cap });
        }
        let cur = h0(m);
        let delta = cur - prev_h0;
        debug_assert!(delta >= prev_delta, "section counts must be convex");
        for _ in 0..delta - prev_delta {
            twists.push(-m);
        }
        prev_h0 = cur;
        prev_delta = delta;
        if delta as usize == rank {
            return Ok(SplitType::new(twists));
        }
    }
}

/// A point of the line together with a subspace of the fiber of `⊕O(c_i)`
/// there. The fiber is trivialized by evaluating the standard basis, so the
/// subspace is just a matrix of independent columns.
#[derive(Debug, Clone)]
pub struct FiberSubspace {
    point: (Scalar, Scalar),
    basis: ExactMatrix,
}

impl FiberSubspace {
    pub fn new(point: (Scalar, Scalar), basis: ExactMatrix) -> Result<Self> {
        if point.0.field() != point.1.field() {
            return Err(Error::FieldMismatch(point.0.field(), point.1.field()));
        }
        if point.0.field() != basis.field() {
            return Err(Error::FieldMismatch(point.0.field(), basis.field()));
        }
        if point.0.is_zero() && point.1.is_zero() {
            return Err(Error::Invalid("(0:0) is not a point of the line".into()));
        }
        if basis.rank() != basis.cols() {
            return Err(Error::RankMismatch {
                expected: basis.cols(),
                found: basis.rank(),
            });
        }
        Ok(FiberSubspace { point, basis })
    }

    /// The subspace is the full fiber at the default point `(1:0)`.
    pub fn full_fiber(field: FieldKind, rank: usize) -> Self {
        FiberSubspace {
            point: (Scalar::one(field), Scalar::zero(field)),
            basis: ExactMatrix::identity(field, rank),
        }
    }

    pub fn point(&self) -> &(Scalar, Scalar) {
        &self.point
    }

    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Schema: `{"point": [x, y], "basis": [[row], ...]}` where the basis
    /// rows have one entry per retained direction.
    pub fn from_json(field: FieldKind, v: &serde_json::Value) -> Result<FiberSubspace> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Json("expected an object with point and basis".into()))?;
        let point = obj
            .get("point")
            .and_then(|p| p.as_array())
            .filter(|p| p.len() == 2)
            .ok_or_else(|| Error::Json("point must be a two-element array".into()))?;
        let x = Scalar::from_json(field, &point[0])?;
        let y = Scalar::from_json(field, &point[1])?;
        let rows = obj
            .get("basis")
            .and_then(|b| b.as_array())
            .ok_or_else(|| Error::Json("missing basis array".into()))?;
        let nrows = rows.len();
        let ncols = rows.first().and_then(|r| r.as_array()).map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Json("basis rows must be arrays".into()))?;
            if row.len() != ncols {
                return Err(Error::Shape("ragged basis rows".into()));
            }
            for entry in row {
                data.push(Scalar::from_json(field, entry)?);
            }
        }
        FiberSubspace::new((x, y), ExactMatrix::new(field, nrows, ncols, data)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.basis.rows())
            .map(|i| {
                serde_json::Value::Array(
                    (0..self.basis.cols()).map(|j| self.basis[(i, j)].to_json()).collect(),
                )
            })
            .collect();
        serde_json::json!({
            "point": [self.point.0.to_json(), self.point.1.to_json()],
            "basis": rows,
        })
    }
}

/// Elementary modification: the subsheaf `E' ⊆ E = ⊕O(c_i)` of sections
/// whose value at the point lies in the subspace `K`. The degree drops by
/// the codimension of `K`; the splitting type is recovered by the same
/// section-count scan, where `h^0(E'(m))` counts sections of `E(m)` whose
/// evaluation is annihilated by the functionals cutting out `K`.
pub fn modify(e: &SplitType, f: &FiberSubspace) -> Result<SplitType> {
    let field = f.basis().field();
    let r = e.rank();
    if f.basis().rows() != r {
        return Err(Error::Shape(format!(
            "subspace lives in a rank-{} fiber, bundle has rank {}",
            f.basis().rows(),
            r
        )));
    }
    if f.dim() > r {
        return Err(Error::RankMismatch { expected: r, found: f.dim() });
    }
    // Rows annihilating K: a basis of the left kernel of the basis matrix.
    let q = f.basis().transpose().kernel_basis().transpose();
    debug_assert_eq!(q.rows(), r - f.dim());
    let (x0, y0) = f.point().clone();
    let m0 = -e.twists().iter().copied().max().unwrap_or(0) - 1;
    let cap = m0 + 10 * (e.rank() as i64 + 2) + 10;
    let h0 = |m: i64| -> u64 {
        // Condition matrix: sections of ⊕O(c_i + m) evaluated at the point
        // (monomial x^(deg-k) y^k evaluates to x0^(deg-k) y0^k, landing in
        // fiber coordinate i), then hit with q.
        let dims: Vec<usize> = e
            .twists()
            .iter()
            .map(|&c| (c + m + 1).max(0) as usize)
            .collect();
        let cols: usize = dims.iter().sum();
        let mut cond = ExactMatrix::zero(field, q.rows(), cols);
        let offs = offsets(&dims);
        for (i, &dim_i) in dims.iter().enumerate() {
            for k in 0..dim_i {
                let deg = (e.twists()[i] + m) as u64;
                let val = x0.pow(deg - k as u64).mul(&y0.pow(k as u64));
                for row in 0..q.rows() {
                    cond[(row, offs[i] + k)] = q[(row, i)].mul(&val);
                }
            }
        }
        (cols - cond.rank()) as u64
    };
    reconstruct_from_h0(r, m0, cap, h0)
}

/// Everything the Jacobian construction produces for one pair `(P, g)`.
#[derive(Debug, Clone)]
pub struct JacobianReport {
    pub map: GradedMap,
    /// Dimension of the space of candidate maps: `n · h^0(O(d(δ-1)))`.
    pub hom_dim: u64,
    pub surjective: bool,
    pub kernel: SplitType,
    pub h0_kernel: u64,
    /// The kernel has all twists ≥ -1, equivalently `h^1(kernel) = 0`.
    pub generic: bool,
}

/// Builds the derivative map `D_gP : O(d)^n → O(dδ)` with entries
/// `∂P/∂x_i` substituted at `g`, and analyzes its kernel bundle.
pub fn jacobian_analysis(p: &MultiPoly, g: &[BinaryForm], d: usize) -> Result<JacobianReport> {
    let field = p.field();
    let n = p.nvars();
    if g.len() != n {
        return Err(Error::Shape(format!(
            "{} substitution forms for {} variables",
            g.len(),
            n
        )));
    }
    let delta = p
        .homogeneous_degree()?
        .ok_or_else(|| Error::Invalid("the zero polynomial has no derivative map".into()))?;
    if delta == 0 {
        return Err(Error::Degree("polynomial must have positive degree".into()));
    }
    let entry_deg = d * (delta - 1);
    let mut row = Vec::with_capacity(n);
    for i in 0..n {
        let partial = p.partial(i)?;
        row.push(partial.substitute(g, d)?);
    }
    let source = SplitType::new(vec![d as i64; n]);
    let map = GradedMap::row(field, source, (d * delta) as i64, row)?;
    let hom_dim = n as u64 * (entry_deg as u64 + 1);
    let surjective = map.is_fiberwise_surjective();
    let kernel = map.kernel_split_type()?;
    let h0_kernel = kernel.h0_twist(0);
    let generic = kernel.h1_twist(0) == 0;
    Ok(JacobianReport { map, hom_dim, surjective, kernel, h0_kernel, generic })
}

/// Frequency table of kernel splitting types over a deterministic sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleTable {
    pub counts: BTreeMap<SplitType, u64>,
    pub trials: u64,
    pub rejected: u64,
}

impl SampleTable {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "trials": self.trials,
            "rejected": self.rejected,
            "counts": self
                .counts
                .iter()
                .map(|(k, v)| serde_json::json!({ "kernel": k.to_json(), "count": v }))
                .collect::<Vec<_>>(),
        })
    }
}

/// Draws one scalar coefficient: uniform in `[0, p)` for a prime field,
/// uniform in `[-50, 50]` for the rationals.
pub fn random_coefficient(field: FieldKind, rng: &mut SplitMix64) -> Scalar {
    match field {
        FieldKind::Prime(p) => Scalar::from_i64(field, rng.below(p) as i64),
        FieldKind::Rational => Scalar::from_i64(field, rng.range_i64(-50, 50)),
    }
}

/// One random `n`-tuple of degree-`d` forms.
pub fn random_section_tuple(
    field: FieldKind,
    n: usize,
    d: usize,
    rng: &mut SplitMix64,
) -> Vec<BinaryForm> {
    (0..n)
        .map(|_| {
            let coeffs: Vec<Scalar> =
                (0..=d).map(|_| random_coefficient(field, rng)).collect();
            BinaryForm::new(field, coeffs).expect("coefficients in-field")
        })
        .collect()
}

/// The power-sum polynomial `x_1^δ + ... + x_n^δ`, the default target of the
/// sampling experiment.
pub fn power_sum(field: FieldKind, n: usize, delta: u32) -> MultiPoly {
    let mut p = MultiPoly::zero(field, n);
    for i in 0..n {
        let mut exps = vec![0u32; n];
        exps[i] = delta;
        p.add_term(exps, Scalar::one(field))
            .expect("term is in-field");
    }
    p
}

/// Samples `trials` tuples `g`, skips those where `D_gP` is not fiberwise
/// surjective, and tabulates kernel splitting types. Deterministic given
/// the seed; trials consume the single stream sequentially.
pub fn sample_experiment(
    p: &MultiPoly,
    d: usize,
    field: FieldKind,
    trials: u64,
    seed: u64,
) -> Result<SampleTable> {
    if p.field() != field {
        return Err(Error::FieldMismatch(field, p.field()));
    }
    let n = p.nvars();
    let mut rng = SplitMix64::new(seed);
    let mut counts: BTreeMap<SplitType, u64> = BTreeMap::new();
    let mut rejected = 0u64;
    for _ in 0..trials {
        let g = random_section_tuple(field, n, d, &mut rng);
        let report = jacobian_analysis(p, &g, d)?;
        if !report.surjective {
            rejected += 1;
            continue;
        }
        *counts.entry(report.kernel).or_insert(0) += 1;
    }
    Ok(SampleTable { counts, trials, rejected })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldKind = FieldKind::Rational;

    fn form(coeffs: &[i64]) -> BinaryForm {
        BinaryForm::from_i64_coeffs(Q, coeffs)
    }

    #[test]
    fn section_counts_match_the_example() {
        let src = SplitType::new(vec![1, 1, 1]);
        assert_eq!(src.h0_twist(0), 6);
        assert_eq!(SplitType::new(vec![4]).h0_twist(0), 5);
        assert_eq!(SplitType::new(vec![-2]).h1_twist(0), 1);
    }

    #[test]
    fn euler_characteristic_identity() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..200 {
            let r = rng.below(4) as usize + 1;
            let s = SplitType::new((0..r).map(|_| rng.range_i64(-5, 5)).collect());
            let m = rng.range_i64(-6, 6);
            let chi = s.h0_twist(m) as i64 - s.h1_twist(m) as i64;
            assert_eq!(chi, s.degree() + s.rank() as i64 * (m + 1));
        }
    }

    fn example_map(g: &[BinaryForm]) -> GradedMap {
        let p = power_sum(Q, 3, 4);
        let rows: Vec<BinaryForm> = (0..3)
            .map(|i| p.partial(i).unwrap().substitute(g, 1).unwrap())
            .collect();
        GradedMap::row(Q, SplitType::new(vec![1, 1, 1]), 4, rows).unwrap()
    }

    #[test]
    fn generic_rank_cases() {
        let zero = GradedMap::row(
            Q,
            SplitType::new(vec![0, 0]),
            0,
            vec![BinaryForm::zero(Q), BinaryForm::zero(Q)],
        )
        .unwrap();
        assert_eq!(zero.generic_rank(), 0);

        let id = GradedMap::new(
            Q,
            SplitType::new(vec![0, 0]),
            SplitType::new(vec![0, 0]),
            vec![
                vec![form(&[1]), BinaryForm::zero(Q)],
                vec![BinaryForm::zero(Q), form(&[1])],
            ],
        )
        .unwrap();
        assert_eq!(id.generic_rank(), 2);

        let row = GradedMap::row(
            Q,
            SplitType::new(vec![1, 1, 1]),
            4,
            vec![form(&[1, 0, 0, 0]), form(&[0, 0, 0, 1]), form(&[0, 1, 0, 0])],
        )
        .unwrap();
        assert_eq!(row.generic_rank(), 1);
    }

    #[test]
    fn degree_compatibility_is_enforced() {
        // a degree-2 entry where degree 3 is required
        let bad = GradedMap::row(Q, SplitType::new(vec![1]), 4, vec![form(&[1, 0, 0])]);
        assert!(matches!(bad, Err(Error::Degree(_))));
        // negative required degree forces a zero entry
        let bad2 = GradedMap::new(
            Q,
            SplitType::new(vec![2]),
            SplitType::new(vec![0]),
            vec![vec![form(&[1])]],
        );
        assert!(bad2.is_err());
        let ok = GradedMap::new(
            Q,
            SplitType::new(vec![2]),
            SplitType::new(vec![0]),
            vec![vec![BinaryForm::zero(Q)]],
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn fiberwise_surjectivity() {
        let ok = GradedMap::row(
            Q,
            SplitType::new(vec![-1, -1]),
            0,
            vec![form(&[1, 0]), form(&[0, 1])],
        )
        .unwrap();
        assert!(ok.is_fiberwise_surjective());

        let bad = GradedMap::row(
            Q,
            SplitType::new(vec![-2, -2]),
            0,
            vec![form(&[1, 0, 0]), form(&[0, 1, 0])],
        )
        .unwrap();
        assert!(!bad.is_fiberwise_surjective());
    }

    #[test]
    fn kernel_of_the_cubic_row() {
        // (x^3, y^3, x y^2) : O(1)^3 → O(4)
        let map = GradedMap::row(
            Q,
            SplitType::new(vec![1, 1, 1]),
            4,
            vec![form(&[1, 0, 0, 0]), form(&[0, 0, 0, 1]), form(&[0, 1, 0, 0])],
        )
        .unwrap();
        let k = map.kernel_split_type().unwrap();
        assert_eq!(k.rank(), 2);
        assert_eq!(k.degree(), -1);
        assert!(k == SplitType::new(vec![0, -1]) || k == SplitType::new(vec![1, -2]));
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let id = GradedMap::new(
            Q,
            SplitType::new(vec![0, 0]),
            SplitType::new(vec![0, 0]),
            vec![
                vec![form(&[1]), BinaryForm::zero(Q)],
                vec![BinaryForm::zero(Q), form(&[1])],
            ],
        )
        .unwrap();
        assert_eq!(id.kernel_split_type().unwrap(), SplitType::empty());
    }

    #[test]
    fn kernel_with_unbalanced_type_over_f5() {
        // g = (x, y, 0): the third summand O(1) sits inside the kernel, and
        // the rest is the syzygy line of (x^3, y^3), of degree -2. So the
        // kernel is {1, -2}, the non-generic case, over any field.
        let f5 = FieldKind::Prime(5);
        let p = power_sum(f5, 3, 4);
        let g = vec![
            BinaryForm::from_i64_coeffs(f5, &[1, 0]),
            BinaryForm::from_i64_coeffs(f5, &[0, 1]),
            BinaryForm::zero(f5),
        ];
        let report = jacobian_analysis(&p, &g, 1).unwrap();
        assert!(report.surjective);
        assert_eq!(report.kernel, SplitType::new(vec![1, -2]));
        assert_eq!(report.h0_kernel, 2);
        assert!(!report.generic);
    }

    #[test]
    fn kernel_h0_matches_split_type_on_scan_range() {
        let map = example_map(&[form(&[1, 2]), form(&[3, -1]), form(&[0, 1])]);
        let k = map.kernel_split_type().unwrap();
        for m in -2..=4 {
            assert_eq!(map.kernel_h0(m), k.h0_twist(m), "twist {m}");
        }
    }

    #[test]
    fn surjective_kernels_balance_rank_and_degree() {
        let mut rng = SplitMix64::new(99);
        let p = power_sum(Q, 3, 4);
        let mut seen = 0;
        while seen < 20 {
            let g = random_section_tuple(Q, 3, 1, &mut rng);
            let rep = jacobian_analysis(&p, &g, 1).unwrap();
            if !rep.surjective {
                continue;
            }
            seen += 1;
            assert_eq!(rep.kernel.rank(), 2);
            assert_eq!(rep.kernel.degree(), -1);
        }
    }

    #[test]
    fn modify_known_cases() {
        // K = full fiber: nothing changes.
        let e = SplitType::new(vec![2, 0]);
        let full = FiberSubspace::full_fiber(Q, 2);
        assert_eq!(modify(&e, &full).unwrap(), e);

        // O^2 at (1:0) with K = span(e1): one summand picks up a zero.
        let e = SplitType::new(vec![0, 0]);
        let k = FiberSubspace::new(
            (Scalar::one(Q), Scalar::zero(Q)),
            ExactMatrix::from_i64_rows(Q, &[&[1], &[0]]),
        )
        .unwrap();
        assert_eq!(modify(&e, &k).unwrap(), SplitType::new(vec![0, -1]));

        // O with K = 0: the ideal sheaf of the point.
        let e = SplitType::new(vec![0]);
        let k = FiberSubspace::new(
            (Scalar::one(Q), Scalar::zero(Q)),
            ExactMatrix::zero(Q, 1, 0),
        )
        .unwrap();
        assert_eq!(modify(&e, &k).unwrap(), SplitType::new(vec![-1]));
    }

    #[test]
    fn modify_drops_degree_by_codimension() {
        let mut rng = SplitMix64::new(1234);
        for _ in 0..60 {
            let r = rng.below(3) as usize + 1;
            let e = SplitType::new((0..r).map(|_| rng.range_i64(-2, 3)).collect());
            let dim = rng.below(r as u64 + 1) as usize;
            // random point, random subspace of the fiber
            let (x0, y0) = loop {
                let x = random_coefficient(Q, &mut rng);
                let y = random_coefficient(Q, &mut rng);
                if !x.is_zero() || !y.is_zero() {
                    break (x, y);
                }
            };
            let basis = loop {
                let data: Vec<Scalar> = (0..r * dim)
                    .map(|_| Scalar::from_i64(Q, rng.range_i64(-3, 3)))
                    .collect();
                let m = ExactMatrix::new(Q, r, dim, data).unwrap();
                if m.rank() == dim {
                    break m;
                }
            };
            let f = FiberSubspace::new((x0, y0), basis).unwrap();
            let e2 = modify(&e, &f).unwrap();
            assert_eq!(e2.rank(), e.rank());
            assert_eq!(e.degree() - e2.degree(), (r - dim) as i64);
            for m in -4..=4 {
                assert!(e2.h0_twist(m) <= e.h0_twist(m), "h0 may never grow");
            }
        }
    }

    #[test]
    fn jacobian_rejects_bad_input() {
        let mut inhom = MultiPoly::zero(Q, 2);
        inhom.add_term(vec![1, 0], Scalar::one(Q)).unwrap();
        inhom.add_term(vec![2, 0], Scalar::one(Q)).unwrap();
        let g = vec![form(&[1, 0]), form(&[0, 1])];
        assert!(jacobian_analysis(&inhom, &g, 1).is_err());

        let p = power_sum(Q, 2, 3);
        let bad_g = vec![form(&[1, 0]), form(&[1, 0, 0])];
        assert!(jacobian_analysis(&p, &bad_g, 1).is_err());
    }

    #[test]
    fn jacobian_identity_case() {
        // n=1, δ=1, P = x_1: D_gP is an isomorphism, empty kernel.
        let mut p = MultiPoly::zero(Q, 1);
        p.add_term(vec![1], Scalar::one(Q)).unwrap();
        let g = vec![form(&[2, 5])];
        let rep = jacobian_analysis(&p, &g, 1).unwrap();
        assert!(rep.surjective);
        assert_eq!(rep.kernel, SplitType::empty());
        assert_eq!(rep.h0_kernel, 0);
    }

    #[test]
    fn jacobian_hom_dimension() {
        let p = power_sum(Q, 3, 4);
        let g = vec![form(&[1, 0]), form(&[0, 1]), form(&[1, 1])];
        let rep = jacobian_analysis(&p, &g, 1).unwrap();
        assert_eq!(rep.hom_dim, 12);
    }

    #[test]
    fn sampling_is_deterministic_and_empty_for_zero_trials() {
        let f101 = FieldKind::Prime(101);
        let p = power_sum(f101, 3, 4);
        let empty = sample_experiment(&p, 1, f101, 0, 7).unwrap();
        assert!(empty.counts.is_empty());
        let a = sample_experiment(&p, 1, f101, 40, 7).unwrap();
        let b = sample_experiment(&p, 1, f101, 40, 7).unwrap();
        assert_eq!(a, b);
        let total: u64 = a.counts.values().sum();
        assert_eq!(total + a.rejected, 40);
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(
            subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(2, 3), Vec::<Vec<usize>>::new());
    }
}
