//! Exact verification of two multilinear-algebra identities used in the
//! tangent-space computation: the kernel of the derivative of the minor map
//! on the rank stratum, and the trace-wedge identity.
//!
//! For an `n x n` map `f` of rank `r`, the top nonvanishing minors assemble
//! into `Λ^(r+1) f`, and the derivative of that wedge at `f` is
//!
//! ```text
//! D_f(σ)(v_1 ∧ ... ∧ v_{r+1}) = Σ_i f(v_1) ∧ ... ∧ σ(v_i) ∧ ... ∧ f(v_{r+1}).
//! ```
//!
//! Its kernel consists of the σ that induce the zero map `ker f → coker f`,
//! a subspace of dimension `n² - (n-r)²`; both sides are computed here from
//! scratch and compared by double inclusion.

use crate::error::{Error, Result};
use crate::field::{FieldKind, Scalar};
use crate::matrix::ExactMatrix;
use crate::p1::subsets;
use crate::rng::SplitMix64;

/// A square map together with its rank certificate: a kernel basis and a
/// cokernel projection (rows spanning the left kernel, so `q · f = 0`).
#[derive(Debug, Clone)]
pub struct RankedMap {
    f: ExactMatrix,
    r: usize,
    kernel: ExactMatrix,
    q: ExactMatrix,
}

impl RankedMap {
    pub fn new(f: ExactMatrix, r: usize) -> Result<Self> {
        if f.rows() != f.cols() {
            return Err(Error::Shape("ranked map must be square".into()));
        }
        let found = f.rank();
        if found != r {
            return Err(Error::RankMismatch { expected: r, found });
        }
        let kernel = f.kernel_basis();
        let q = f.transpose().kernel_basis().transpose();
        debug_assert!(q.mul(&f).expect("shapes agree").is_zero());
        Ok(RankedMap { f, r, kernel, q })
    }

    pub fn f(&self) -> &ExactMatrix {
        &self.f
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn kernel(&self) -> &ExactMatrix {
        &self.kernel
    }

    pub fn cokernel_projection(&self) -> &ExactMatrix {
        &self.q
    }
}

/// Matrix of `σ ↦ Λ-derivative of the minor map at f`, from `Hom(V', V)`
/// (vectorized row-major, `σ_(k,l)` at column `k·n + l`) to
/// `Hom(Λ^(r+1) V', Λ^(r+1) V)` (row `T_idx · C + S_idx` for wedge basis
/// subsets `T`, `S` in lexicographic order, `C = C(n, r+1)`).
///
/// For `σ = E_(k,l)` only the position of `l` inside `S` contributes, so the
/// `(T, S)` entry is the determinant of the `(r+1) x (r+1)` matrix whose
/// columns are the `f`-columns at `S` with the column at `l` replaced by the
/// coordinate vector `e_k`, rows restricted to `T`.
pub fn minor_derivative(f: &ExactMatrix, r: usize) -> Result<ExactMatrix> {
    if f.rows() != f.cols() {
        return Err(Error::Shape("minor derivative needs a square map".into()));
    }
    let n = f.rows();
    let found = f.rank();
    if found != r {
        return Err(Error::RankMismatch { expected: r, found });
    }
    let field = f.field();
    let wedge = subsets(n, r + 1);
    let c = wedge.len();
    let mut out = ExactMatrix::zero(field, c * c, n * n);
    for (s_idx, s) in wedge.iter().enumerate() {
        for (pos, &l) in s.iter().enumerate() {
            for k in 0..n {
                // The term where σ hits the basis vector e_l, replaced by e_k.
                for (t_idx, t) in wedge.iter().enumerate() {
                    let mut sub = ExactMatrix::zero(field, r + 1, r + 1);
                    for (row_i, &t_row) in t.iter().enumerate() {
                        for (col_i, &s_col) in s.iter().enumerate() {
                            sub[(row_i, col_i)] = if col_i == pos {
                                if t_row == k {
                                    Scalar::one(field)
                                } else {
                                    Scalar::zero(field)
                                }
                            } else {
                                f[(t_row, s_col)].clone()
                            };
                        }
                    }
                    let d = sub.det().expect("square submatrix");
                    if !d.is_zero() {
                        let row = t_idx * c + s_idx;
                        let col = k * n + l;
                        out[(row, col)] = out[(row, col)].add(&d);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Matrix of `σ ↦ q · σ · w` from `Hom(V', V)` to `Hom(W', W)`, where `w`
/// spans `ker f` and `q` projects onto `coker f`. Entry for `σ = E_(k,l)`
/// at output coordinate `(a, b)` is `q[a, k] · w[l, b]`.
fn induced_boundary_map(map: &RankedMap) -> ExactMatrix {
    let n = map.f.rows();
    let field = map.f.field();
    let w = &map.kernel;
    let q = &map.q;
    let nr = n - map.r;
    let mut out = ExactMatrix::zero(field, nr * nr, n * n);
    for a in 0..nr {
        for b in 0..nr {
            for k in 0..n {
                if q[(a, k)].is_zero() {
                    continue;
                }
                for l in 0..n {
                    out[(a * nr + b, k * n + l)] = q[(a, k)].mul(&w[(l, b)]);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct KernelLemmaReport {
    pub holds: bool,
    pub dim_kernel: usize,
    pub dim_k: usize,
    pub expected_dim: usize,
}

/// Computes `ker(minor_derivative(f, r))` and the subspace `K` of maps
/// killing `ker f → coker f`, and checks they are equal as subspaces of
/// `Hom(V', V)`. Equality is established by double inclusion through exact
/// ranks of the stacked bases, never by dimension count alone.
pub fn lemma_kernel_check(f: &ExactMatrix, r: usize) -> Result<KernelLemmaReport> {
    let map = RankedMap::new(f.clone(), r)?;
    let d = minor_derivative(f, r)?;
    let ker_d = d.kernel_basis();
    let ker_k = induced_boundary_map(&map).kernel_basis();
    let n = f.rows();
    let expected_dim = n * n - (n - r) * (n - r);
    let rank_d = ker_d.rank();
    let rank_k = ker_k.rank();
    let joint = ker_d.hstack(&ker_k)?.rank();
    let holds = joint == rank_d && joint == rank_k;
    Ok(KernelLemmaReport {
        holds: holds && rank_d == expected_dim,
        dim_kernel: rank_d,
        dim_k: rank_k,
        expected_dim,
    })
}

#[derive(Debug, Clone)]
pub struct TraceWedgeReport {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub equal: bool,
}

/// Checks `Σ_i s_1 ∧ ... ∧ (α s_i) ∧ ... ∧ s_n = (tr α)(s_1 ∧ ... ∧ s_n)`
/// in the top wedge power: each side is a determinant computation on the
/// column matrix of the `s_i`.
pub fn trace_wedge_check(alpha: &ExactMatrix, s: &ExactMatrix) -> Result<TraceWedgeReport> {
    let n = s.cols();
    if alpha.rows() != alpha.cols() || alpha.rows() != s.rows() || s.rows() != n {
        return Err(Error::Shape(
            "need alpha n x n and n columns s_i of length n".into(),
        ));
    }
    if alpha.field() != s.field() {
        return Err(Error::FieldMismatch(alpha.field(), s.field()));
    }
    let field = s.field();
    let alpha_s = alpha.mul(s)?;
    let mut lhs = Scalar::zero(field);
    for i in 0..n {
        let mut replaced = s.clone();
        for row in 0..n {
            replaced[(row, i)] = alpha_s[(row, i)].clone();
        }
        lhs = lhs.add(&replaced.det()?);
    }
    let mut trace = Scalar::zero(field);
    for i in 0..n {
        trace = trace.add(&alpha[(i, i)]);
    }
    let rhs = trace.mul(&s.det()?);
    let equal = lhs == rhs;
    Ok(TraceWedgeReport { lhs, rhs, equal })
}

/// Outcome of a deterministic batch of kernel-lemma checks.
#[derive(Debug, Clone)]
pub struct MinorCheckSummary {
    pub trials: u64,
    pub passes: u64,
    pub all_hold: bool,
    /// `(n, r)` of the first failing instance, if any.
    pub first_failure: Option<(usize, usize)>,
}

pub fn random_matrix(field: FieldKind, rows: usize, cols: usize, rng: &mut SplitMix64) -> ExactMatrix {
    let data = (0..rows * cols)
        .map(|_| match field {
            FieldKind::Prime(p) => Scalar::from_i64(field, rng.below(p) as i64),
            FieldKind::Rational => Scalar::from_i64(field, rng.range_i64(-9, 9)),
        })
        .collect();
    ExactMatrix::new(field, rows, cols, data).expect("entries in-field")
}

/// A random `n x n` matrix of exact rank `r`, built as a product of full-rank
/// `n x r` and `r x n` factors (resampled until the rank certificate holds).
pub fn random_matrix_of_rank(
    field: FieldKind,
    n: usize,
    r: usize,
    rng: &mut SplitMix64,
) -> ExactMatrix {
    assert!(r <= n);
    loop {
        let a = random_matrix(field, n, r, rng);
        let b = random_matrix(field, r, n, rng);
        let f = a.mul(&b).expect("shapes agree");
        if f.rank() == r {
            return f;
        }
    }
}

/// Runs `trials` kernel-lemma checks with random maps of random or fixed
/// rank; `n` is the matrix size, `r = None` draws a fresh rank each trial.
pub fn run_minor_trials(
    field: FieldKind,
    n: usize,
    r: Option<usize>,
    trials: u64,
    seed: u64,
) -> Result<MinorCheckSummary> {
    if n == 0 {
        return Err(Error::Invalid("matrix size must be positive".into()));
    }
    if let Some(r) = r {
        if r > n {
            return Err(Error::RankMismatch { expected: n, found: r });
        }
    }
    let mut rng = SplitMix64::new(seed);
    let mut passes = 0u64;
    let mut first_failure = None;
    for _ in 0..trials {
        let rr = match r {
            Some(r) => r,
            None => rng.below(n as u64 + 1) as usize,
        };
        let f = random_matrix_of_rank(field, n, rr, &mut rng);
        let rep = lemma_kernel_check(&f, rr)?;
        if rep.holds {
            passes += 1;
        } else if first_failure.is_none() {
            first_failure = Some((n, rr));
        }
    }
    Ok(MinorCheckSummary {
        trials,
        passes,
        all_hold: passes == trials,
        first_failure,
    })
}
