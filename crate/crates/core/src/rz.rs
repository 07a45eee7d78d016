//! Enumeration of the possible Harder-Narasimhan types of the tangent
//! bundle at a point of a basic Rapoport-Zink moduli space at infinite
//! level, together with the special/nonspecial classification.
//!
//! The tangent bundle pulled back along a point has rank `n^2 - 1` and
//! degree `nd - d^2`, is a quotient of a trivial bundle (slopes >= 0), and
//! for `d = 1` has slopes at most `1/n`. Those constraints leave finitely
//! many slope multisets; a divisibility condition on the endomorphism
//! algebra then prunes the multiplicity of slope zero.

use std::collections::BTreeSet;

use num::integer::gcd;
use num::rational::Ratio;

use crate::error::{Error, Result};
use crate::hn::{H0Dim, HNType, NewtonSlopes, Slope};

/// A basic Rapoport-Zink datum: an isoclinic p-divisible group of height
/// `n` and dimension `d` with `0 < d < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RZDatum {
    n: u64,
    d: u64,
}

impl RZDatum {
    pub fn new(n: u64, d: u64) -> Result<Self> {
        if d == 0 || d >= n {
            return Err(Error::Invalid(format!(
                "need 0 < dim < height, got dim {d}, height {n}"
            )));
        }
        Ok(RZDatum { n, d })
    }

    pub fn height(&self) -> u64 {
        self.n
    }

    pub fn dim(&self) -> u64 {
        self.d
    }

    /// Newton slopes of the group: isoclinic of slope `d/n`.
    pub fn newton(&self) -> NewtonSlopes {
        let g = gcd(self.n, self.d);
        NewtonSlopes::single(self.d as i64, self.n as i64, g).expect("height is positive")
    }

    /// Dimension of the endomorphism algebra of the isocrystal.
    pub fn endo_dim(&self) -> u64 {
        self.n * self.n
    }

    /// Rank and degree of the pulled-back relative tangent bundle.
    pub fn tangent_rank_degree(&self) -> (u64, i64) {
        let n = self.n as i64;
        let d = self.d as i64;
        ((self.n * self.n - 1), n * d - d * d)
    }

    /// The slope bound `1/n` valid for one-dimensional groups; no bound is
    /// known for `d > 1`, so callers must supply one.
    pub fn default_slope_max(&self) -> Option<Slope> {
        (self.d == 1).then(|| Slope::new(1, self.n as i64).expect("height is positive"))
    }
}

fn ratio_le(a: &Ratio<i64>, b: &Ratio<i64>) -> bool {
    a <= b
}

/// All reduced slopes `a/b` with `b <= max_den` inside `[lo, hi]`, sorted
/// descending.
fn slope_candidates(max_den: u64, lo: &Slope, hi: &Slope) -> Vec<Ratio<i64>> {
    let lo = Ratio::new(lo.num(), lo.den() as i64);
    let hi = Ratio::new(hi.num(), hi.den() as i64);
    let mut out = BTreeSet::new();
    for b in 1..=max_den as i64 {
        let a_min = (lo * Ratio::from_integer(b)).ceil().to_integer();
        let a_max = (hi * Ratio::from_integer(b)).floor().to_integer();
        for a in a_min..=a_max {
            if gcd(a, b) == 1 {
                out.insert(Ratio::new(a, b));
            }
        }
    }
    out.into_iter().rev().collect()
}

/// Depth-first completion: candidates are strictly descending, so each
/// multiset is produced exactly once. The interval prune bounds the
/// reachable degree by `remaining rank` times the extreme available slopes.
fn complete(
    cands: &[Ratio<i64>],
    idx: usize,
    rem_rank: u64,
    rem_deg: i64,
    stack: &mut Vec<(Slope, u64)>,
    out: &mut Vec<HNType>,
) {
    if rem_rank == 0 {
        if rem_deg == 0 {
            out.push(HNType::new(stack.clone()));
        }
        return;
    }
    if idx == cands.len() {
        return;
    }
    let max_deg = Ratio::from_integer(rem_rank as i64) * cands[idx];
    let min_deg = Ratio::from_integer(rem_rank as i64) * *cands.last().expect("nonempty");
    let rd = Ratio::from_integer(rem_deg);
    if !ratio_le(&rd, &max_deg) || !ratio_le(&min_deg, &rd) {
        return;
    }
    complete(cands, idx + 1, rem_rank, rem_deg, stack, out);
    let s = cands[idx];
    let (a, b) = (*s.numer(), *s.denom());
    let slope = Slope::new(a, b).expect("candidate denominators are positive");
    let mut mult = 1;
    while mult * b as u64 <= rem_rank {
        stack.push((slope, mult));
        complete(
            cands,
            idx + 1,
            rem_rank - mult * b as u64,
            rem_deg - mult as i64 * a,
            stack,
            out,
        );
        stack.pop();
        mult += 1;
    }
}

/// Canonical profile order: descending lexicographic on the summand
/// sequence, comparing `(slope, multiplicity)` positionwise with larger
/// entries first and longer sequences first on a tie.
pub fn profile_order(a: &HNType, b: &HNType) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    for ((sa, ma), (sb, mb)) in a.summands().iter().zip(b.summands()) {
        match sb.partial_cmp(sa).expect("slopes are totally ordered") {
            Ordering::Equal => {}
            other => return other,
        }
        match mb.cmp(ma) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    b.summands().len().cmp(&a.summands().len())
}

/// All HN types with the given rank and degree whose slopes lie in
/// `[slope_min, slope_max]`, sorted canonically. The search partitions on
/// the choice of the largest slope and runs the partitions on separate
/// threads; the merge is a deterministic sorted union.
pub fn enumerate_profiles(
    rank: u64,
    degree: i64,
    slope_min: &Slope,
    slope_max: &Slope,
) -> Result<Vec<HNType>> {
    if rank == 0 {
        return Err(Error::Invalid("rank must be positive".into()));
    }
    let cands = slope_candidates(rank, slope_min, slope_max);
    if cands.is_empty() {
        return Ok(Vec::new());
    }
    let chunks: Vec<Vec<HNType>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..cands.len())
            .map(|i| {
                let cands = &cands;
                scope.spawn(move || {
                    // partition: profiles whose largest slope is cands[i]
                    let s = cands[i];
                    let (a, b) = (*s.numer(), *s.denom());
                    let slope = Slope::new(a, b).expect("positive denominator");
                    let mut out = Vec::new();
                    let mut stack = Vec::new();
                    let mut mult = 1;
                    while mult * b as u64 <= rank {
                        stack.push((slope, mult));
                        complete(
                            cands,
                            i + 1,
                            rank - mult * b as u64,
                            degree - mult as i64 * a,
                            &mut stack,
                            &mut out,
                        );
                        stack.pop();
                        mult += 1;
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut all: Vec<HNType> = chunks.into_iter().flatten().collect();
    all.sort_by(profile_order);
    Ok(all)
}

/// Multiplicities of slope zero compatible with a division subalgebra of
/// the degree-`n` division algebra of endomorphisms: `0` together with
/// `m e^2 - 1` over factorizations with `m e` dividing `n` and `m e^2 > 1`.
/// This is the necessary divisibility condition only; it is exact for
/// `n <= 3`.
pub fn allowed_zero_multiplicities(n: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::from([0]);
    for k in 1..=n {
        if !n.is_multiple_of(k) {
            continue;
        }
        for e in 1..=k {
            if !k.is_multiple_of(e) {
                continue;
            }
            let dim = k * e; // m e^2 with m = k / e
            if dim > 1 {
                out.insert(dim - 1);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Special,
    NonspecialSmooth,
}

/// Classifies a tangent profile through the section space of its dual: the
/// point is special exactly when the dual retains sections, which for
/// nonnegative slopes means slope zero occurs.
pub fn classify_point(profile: &HNType) -> Result<PointClass> {
    if profile.summands().iter().any(|(s, _)| s.is_negative()) {
        return Err(Error::Invalid(
            "a tangent profile is a quotient of a trivial bundle and cannot have negative slopes"
                .into(),
        ));
    }
    match profile.dual().h0_dim() {
        H0Dim::Finite(0) => Ok(PointClass::NonspecialSmooth),
        H0Dim::Finite(_) => Ok(PointClass::Special),
        H0Dim::Infinite => Err(Error::Invalid(
            "dual of a nonnegative profile cannot have positive slopes".into(),
        )),
    }
}

/// A profile that survives the endomorphism-algebra filter, with its
/// classification flags and the implied automorphism-algebra dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentProfile {
    pub hn: HNType,
    pub zero_mult: u64,
    pub special: bool,
    pub smooth: bool,
    pub dim_ax: u64,
}

impl TangentProfile {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "hn": self.hn.to_json(),
            "zero_mult": self.zero_mult,
            "special": self.special,
            "smooth": self.smooth,
            "dim_ax": self.dim_ax,
        })
    }
}

/// Keeps the profiles whose slope-zero multiplicity is realizable by a
/// division subalgebra and annotates each survivor. Profiles without slope
/// zero always survive.
pub fn filter_admissible(profiles: &[HNType], datum: &RZDatum) -> Result<Vec<TangentProfile>> {
    let (rank, degree) = datum.tangent_rank_degree();
    let allowed = allowed_zero_multiplicities(datum.height());
    let zero = Slope::integer(0);
    let mut out = Vec::new();
    for p in profiles {
        if p.rank() != rank || p.degree() != degree {
            return Err(Error::Invalid(format!(
                "profile {p} has rank {} and degree {}, expected {rank} and {degree}",
                p.rank(),
                p.degree()
            )));
        }
        let class = classify_point(p)?;
        let zero_mult = p.multiplicity(&zero);
        if !allowed.contains(&zero_mult) {
            continue;
        }
        let special = class == PointClass::Special;
        out.push(TangentProfile {
            hn: p.clone(),
            zero_mult,
            special,
            smooth: !special,
            dim_ax: zero_mult + 1,
        });
    }
    Ok(out)
}

/// Full pipeline for a datum: enumerate within `[0, slope_max]` and filter.
/// `slope_max` falls back to `1/n` for one-dimensional groups and is
/// required otherwise.
pub fn tangent_profiles(
    datum: &RZDatum,
    slope_max: Option<Slope>,
) -> Result<(Vec<HNType>, Vec<TangentProfile>)> {
    let hi = slope_max.or_else(|| datum.default_slope_max()).ok_or_else(|| {
        Error::Invalid(
            "no default slope bound is known for dim > 1; pass one explicitly".into(),
        )
    })?;
    let (rank, degree) = datum.tangent_rank_degree();
    let enumerated = enumerate_profiles(rank, degree, &Slope::integer(0), &hi)?;
    let admissible = filter_admissible(&enumerated, datum)?;
    Ok((enumerated, admissible))
}
