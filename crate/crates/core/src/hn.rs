//! Harder-Narasimhan slope arithmetic for vector bundles on the
//! Fargues-Fontaine curve over an algebraically closed perfectoid field.
//!
//! A bundle is classified by its HN type: a multiset of reduced rational
//! slopes with multiplicities, where the stable bundle `O(d/h)` has rank `h`
//! and degree `d`. The isocrystal dictionary turns Newton slopes into HN
//! slopes by negation, and a p-divisible group `H` of slopes `s_i` in `[0,1]`
//! has isocrystal slopes `1 - s_i`; composing with a twist by `O(1)` lands
//! back on the slopes of `H` itself. That composite is implemented literally
//! so the round trip is a theorem being checked, not a shortcut.

use crate::error::{Error, Result};
use num::rational::Ratio;
use std::collections::BTreeMap;
use std::fmt;

/// A reduced rational slope `d/h`; `O(d/h)` is stable of rank `h`, degree `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slope(Ratio<i64>);

impl Slope {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Invalid("slope with zero denominator".into()));
        }
        Ok(Slope(Ratio::new(num, den)))
    }

    pub fn integer(n: i64) -> Self {
        Slope(Ratio::from_integer(n))
    }

    pub const ZERO: Slope = Slope(Ratio::new_raw(0, 1));

    /// Reduced numerator `d`, the degree of the stable bundle.
    pub fn num(&self) -> i64 {
        *self.0.numer()
    }

    /// Reduced denominator `h > 0`, the rank of the stable bundle.
    pub fn den(&self) -> u64 {
        *self.0.denom() as u64
    }

    pub fn add(&self, other: &Slope) -> Slope {
        Slope(self.0 + other.0)
    }

    pub fn neg(&self) -> Slope {
        Slope(-self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.num() == 0
    }

    pub fn is_positive(&self) -> bool {
        self.num() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.num() < 0
    }

    /// `1 - slope`, the p-divisible-group-to-isocrystal flip.
    pub fn one_minus(&self) -> Slope {
        Slope(Ratio::from_integer(1) - self.0)
    }

    /// Parses `d/h` or `d`.
    pub fn parse(s: &str) -> Result<Slope> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: i64 = n
            .parse()
            .map_err(|_| Error::Invalid(format!("bad slope `{s}`")))?;
        let den: i64 = d
            .parse()
            .map_err(|_| Error::Invalid(format!("bad slope `{s}`")))?;
        Slope::new(num, den)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den() == 1 {
            write!(f, "{}", self.num())
        } else {
            write!(f, "{}/{}", self.num(), self.den())
        }
    }
}

/// The HN type of a bundle: distinct slopes with positive multiplicities,
/// stored in descending slope order. The empty type is the zero bundle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HNType {
    summands: Vec<(Slope, u64)>,
}

impl HNType {
    /// Canonicalizes: merges duplicate slopes, drops zero multiplicities,
    /// sorts descending.
    pub fn new(pairs: Vec<(Slope, u64)>) -> Self {
        let mut merged: BTreeMap<Slope, u64> = BTreeMap::new();
        for (s, m) in pairs {
            if m > 0 {
                *merged.entry(s).or_insert(0) += m;
            }
        }
        let summands = merged.into_iter().rev().collect();
        HNType { summands }
    }

    pub fn empty() -> Self {
        HNType { summands: Vec::new() }
    }

    /// Single stable summand `O(num/den)^mult`.
    pub fn stable(num: i64, den: i64, mult: u64) -> Result<Self> {
        Ok(HNType::new(vec![(Slope::new(num, den)?, mult)]))
    }

    pub fn summands(&self) -> &[(Slope, u64)] {
        &self.summands
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn rank(&self) -> u64 {
        self.summands.iter().map(|(s, m)| m * s.den()).sum()
    }

    pub fn degree(&self) -> i64 {
        self.summands.iter().map(|(s, m)| *m as i64 * s.num()).sum()
    }

    pub fn mu_max(&self) -> Option<Slope> {
        self.summands.first().map(|(s, _)| *s)
    }

    pub fn mu_min(&self) -> Option<Slope> {
        self.summands.last().map(|(s, _)| *s)
    }

    pub fn is_semistable(&self) -> bool {
        self.summands.len() <= 1
    }

    /// Multiplicity of one slope (0 if absent).
    pub fn multiplicity(&self, s: &Slope) -> u64 {
        self.summands
            .iter()
            .find(|(t, _)| t == s)
            .map_or(0, |(_, m)| *m)
    }

    /// Dual bundle: every slope negates, multiplicities survive.
    pub fn dual(&self) -> HNType {
        HNType::new(
            self.summands
                .iter()
                .map(|(s, m)| (s.neg(), *m))
                .collect(),
        )
    }

    /// Tensor product. `O(λ) ⊗ O(μ)` is semistable of slope `λ + μ`, hence
    /// a sum of copies of `O(λ+μ)`; counting ranks gives multiplicity
    /// `h·h′/h″` with `h″` the reduced denominator of `λ+μ`.
    pub fn tensor(&self, other: &HNType) -> HNType {
        let mut acc: Vec<(Slope, u64)> = Vec::new();
        for (a, ma) in &self.summands {
            for (b, mb) in &other.summands {
                let sum = a.add(b);
                let mult = ma * mb * a.den() * b.den() / sum.den();
                acc.push((sum, mult));
            }
        }
        HNType::new(acc)
    }

    /// `H^0` dimension over the base field: `O(λ)` has no sections for
    /// `λ < 0`, a line of sections for `λ = 0`, and infinitely many for
    /// `λ > 0`.
    pub fn h0_dim(&self) -> H0Dim {
        if self.summands.iter().any(|(s, _)| s.is_positive()) {
            return H0Dim::Infinite;
        }
        H0Dim::Finite(self.multiplicity(&Slope::ZERO))
    }

    /// `H^1(O(λ))` vanishes exactly for `λ ≥ 0`.
    pub fn h1_vanishes(&self) -> bool {
        self.summands.iter().all(|(s, _)| !s.is_negative())
    }

    pub fn all_slopes_positive(&self) -> bool {
        self.summands.iter().all(|(s, _)| s.is_positive())
    }

    pub fn from_json(v: &serde_json::Value) -> Result<HNType> {
        let list = summand_list(v, "summands")?;
        Ok(HNType::new(list))
    }

    /// `{"summands": [{"num", "den", "mult"}, ...]}` sorted by descending
    /// slope.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "summands": self
                .summands
                .iter()
                .map(|(s, m)| {
                    serde_json::json!({ "num": s.num(), "den": s.den(), "mult": m })
                })
                .collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for HNType {
    /// Slopes repeated by multiplicity, descending: `{1/3, 1/3, 0, 0}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (s, m) in &self.summands {
            for _ in 0..*m {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "{s}")?;
            }
        }
        write!(f, "}}")
    }
}

/// Section-space dimension of an HN type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum H0Dim {
    Finite(u64),
    Infinite,
}

impl H0Dim {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            H0Dim::Finite(n) => serde_json::json!(n),
            H0Dim::Infinite => serde_json::json!("infinite"),
        }
    }
}

/// Newton slopes of an isocrystal or of a p-divisible group, stored like an
/// HN type but in ascending order (the Newton polygon convention). The
/// multiplicity counts copies of the simple object of slope `d/h`, so the
/// height is `Σ mult·h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonSlopes {
    slopes: Vec<(Slope, u64)>,
}

impl NewtonSlopes {
    pub fn new(pairs: Vec<(Slope, u64)>) -> Self {
        let mut merged: BTreeMap<Slope, u64> = BTreeMap::new();
        for (s, m) in pairs {
            if m > 0 {
                *merged.entry(s).or_insert(0) += m;
            }
        }
        NewtonSlopes { slopes: merged.into_iter().collect() }
    }

    pub fn single(num: i64, den: i64, mult: u64) -> Result<Self> {
        Ok(NewtonSlopes::new(vec![(Slope::new(num, den)?, mult)]))
    }

    pub fn slopes(&self) -> &[(Slope, u64)] {
        &self.slopes
    }

    pub fn height(&self) -> u64 {
        self.slopes.iter().map(|(s, m)| m * s.den()).sum()
    }

    pub fn is_isoclinic(&self) -> bool {
        self.slopes.len() == 1
    }

    /// True when every slope lies in `[0, 1]`, the p-divisible group range.
    pub fn is_pdiv_range(&self) -> bool {
        self.slopes
            .iter()
            .all(|(s, _)| !s.is_negative() && !s.one_minus().is_negative())
    }

    pub fn has_etale_part(&self) -> bool {
        self.slopes.iter().any(|(s, _)| s.is_zero())
    }

    pub fn from_json(v: &serde_json::Value) -> Result<NewtonSlopes> {
        let list = summand_list(v, "slopes")?;
        Ok(NewtonSlopes::new(list))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "slopes": self
                .slopes
                .iter()
                .map(|(s, m)| {
                    serde_json::json!({ "num": s.num(), "den": s.den(), "mult": m })
                })
                .collect::<Vec<_>>(),
        })
    }
}

fn summand_list(v: &serde_json::Value, key: &str) -> Result<Vec<(Slope, u64)>> {
    let arr = v
        .get(key)
        .and_then(|s| s.as_array())
        .ok_or_else(|| Error::Invalid(format!("expected object with `{key}` array")))?;
    arr.iter()
        .map(|e| {
            let num = e
                .get("num")
                .and_then(|n| n.as_i64())
                .ok_or_else(|| Error::Invalid("summand needs integer `num`".into()))?;
            let den = e
                .get("den")
                .and_then(|n| n.as_i64())
                .ok_or_else(|| Error::Invalid("summand needs integer `den`".into()))?;
            let mult = e.get("mult").and_then(|n| n.as_u64()).unwrap_or(1);
            Ok((Slope::new(num, den)?, mult))
        })
        .collect()
}

/// The bundle attached to an isocrystal: HN slopes are the negatives of the
/// Newton slopes, multiplicities carried along (the simple isocrystal of
/// slope `d/h` has dimension `h`, matching the rank of `O(-d/h)`).
pub fn bundle_of_isocrystal(n: &NewtonSlopes) -> HNType {
    HNType::new(
        n.slopes()
            .iter()
            .map(|(s, m)| (s.neg(), *m))
            .collect(),
    )
}

/// The bundle attached to a p-divisible group `H` with slopes in `[0, 1]`:
/// its isocrystal has slopes `1 - s_i`, and the bundle is the isocrystal
/// bundle twisted by `O(1)`. The slope multiset of the result equals the
/// slopes of `H`; `round_trips_to_input` in the tests checks exactly that.
pub fn bundle_of_pdiv(h: &NewtonSlopes) -> Result<HNType> {
    if !h.is_pdiv_range() {
        return Err(Error::Invalid(
            "p-divisible group slopes must lie in [0, 1]".into(),
        ));
    }
    let isocrystal = NewtonSlopes::new(
        h.slopes()
            .iter()
            .map(|(s, m)| (s.one_minus(), *m))
            .collect(),
    );
    let twist = HNType::stable(1, 1, 1).expect("unit slope");
    Ok(bundle_of_isocrystal(&isocrystal).tensor(&twist))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn hn(pairs: &[(i64, i64, u64)]) -> HNType {
        HNType::new(
            pairs
                .iter()
                .map(|&(n, d, m)| (Slope::new(n, d).unwrap(), m))
                .collect(),
        )
    }

    fn newton(pairs: &[(i64, i64, u64)]) -> NewtonSlopes {
        NewtonSlopes::new(
            pairs
                .iter()
                .map(|&(n, d, m)| (Slope::new(n, d).unwrap(), m))
                .collect(),
        )
    }

    #[test]
    fn slopes_reduce_and_order() {
        let s = Slope::new(2, 4).unwrap();
        assert_eq!((s.num(), s.den()), (1, 2));
        let t = Slope::new(1, -3).unwrap();
        assert_eq!((t.num(), t.den()), (-1, 3));
        assert!(Slope::new(1, 0).is_err());
        assert!(Slope::new(1, 2).unwrap() > Slope::new(1, 3).unwrap());
        assert_eq!(Slope::parse("-2/6").unwrap(), Slope::new(-1, 3).unwrap());
    }

    #[test]
    fn rank_and_degree_bookkeeping() {
        assert_eq!((hn(&[(0, 1, 1)]).rank(), hn(&[(0, 1, 1)]).degree()), (1, 0));
        let third = hn(&[(1, 3, 1)]);
        assert_eq!((third.rank(), third.degree()), (3, 1));
        let mixed = hn(&[(1, 2, 1), (0, 1, 1)]);
        assert_eq!((mixed.rank(), mixed.degree()), (3, 1));
        assert_eq!(mixed.mu_max(), Some(Slope::new(1, 2).unwrap()));
        assert_eq!(mixed.mu_min(), Some(Slope::ZERO));
        assert_eq!(HNType::empty().mu_max(), None);
    }

    #[test]
    fn canonicalization_merges_and_sorts() {
        let t = hn(&[(0, 1, 1), (1, 2, 1), (2, 4, 2)]);
        assert_eq!(t.summands().len(), 2);
        assert_eq!(t.multiplicity(&Slope::new(1, 2).unwrap()), 3);
        assert_eq!(t.summands()[0].0, Slope::new(1, 2).unwrap());
        assert_eq!(format!("{t}"), "{1/2, 1/2, 1/2, 0}");
    }

    #[test]
    fn dual_negates_and_involutes() {
        assert_eq!(hn(&[(0, 1, 2)]).dual(), hn(&[(0, 1, 2)]));
        assert_eq!(hn(&[(1, 3, 1)]).dual(), hn(&[(-1, 3, 1)]));
        let mut rng = SplitMix64::new(11);
        for _ in 0..50 {
            let t = random_hn(&mut rng);
            assert_eq!(t.dual().dual(), t);
            assert_eq!(t.dual().degree(), -t.degree());
            assert_eq!(t.dual().rank(), t.rank());
        }
    }

    #[test]
    fn tensor_unit_and_small_products() {
        let unit = hn(&[(0, 1, 1)]);
        let t = hn(&[(1, 2, 1), (-1, 3, 2)]);
        assert_eq!(unit.tensor(&t), t);
        // O(1/2) ⊗ O(1/3) = O(5/6): ranks 2·3 = 6 force one copy.
        assert_eq!(
            hn(&[(1, 2, 1)]).tensor(&hn(&[(1, 3, 1)])),
            hn(&[(5, 6, 1)])
        );
        // O(1/2) ⊗ O(1/2) = O(1)^4: slope 1 has rank 1, so 2·2 copies.
        assert_eq!(
            hn(&[(1, 2, 1)]).tensor(&hn(&[(1, 2, 1)])),
            hn(&[(1, 1, 4)])
        );
    }

    fn random_slope(rng: &mut SplitMix64) -> Slope {
        let den = rng.range_i64(1, 5);
        let num = rng.range_i64(-6, 6);
        Slope::new(num, den).unwrap()
    }

    fn random_hn(rng: &mut SplitMix64) -> HNType {
        let k = rng.range_i64(1, 3);
        HNType::new(
            (0..k)
                .map(|_| (random_slope(rng), rng.below(3) + 1))
                .collect(),
        )
    }

    #[test]
    fn tensor_is_commutative_and_associative() {
        let mut rng = SplitMix64::new(23);
        for _ in 0..100 {
            let (a, b, c) = (random_hn(&mut rng), random_hn(&mut rng), random_hn(&mut rng));
            assert_eq!(a.tensor(&b), b.tensor(&a));
            assert_eq!(a.tensor(&b).tensor(&c), a.tensor(&b.tensor(&c)));
        }
    }

    #[test]
    fn tensor_rank_degree_bilinearity() {
        let mut rng = SplitMix64::new(37);
        for _ in 0..500 {
            let (a, b) = (random_hn(&mut rng), random_hn(&mut rng));
            let t = a.tensor(&b);
            assert_eq!(t.rank(), a.rank() * b.rank());
            assert_eq!(
                t.degree(),
                a.rank() as i64 * b.degree() + b.rank() as i64 * a.degree()
            );
        }
    }

    #[test]
    fn isocrystal_bundle_negates_newton_slopes() {
        assert_eq!(bundle_of_isocrystal(&newton(&[(0, 1, 1)])), hn(&[(0, 1, 1)]));
        assert_eq!(bundle_of_isocrystal(&newton(&[(1, 1, 1)])), hn(&[(-1, 1, 1)]));
        assert_eq!(
            bundle_of_isocrystal(&newton(&[(2, 3, 1)])),
            hn(&[(-2, 3, 1)])
        );
    }

    #[test]
    fn pdiv_bundle_known_cases() {
        // etale of height 1
        assert_eq!(bundle_of_pdiv(&newton(&[(0, 1, 1)])).unwrap(), hn(&[(0, 1, 1)]));
        // multiplicative of height 1
        assert_eq!(bundle_of_pdiv(&newton(&[(1, 1, 1)])).unwrap(), hn(&[(1, 1, 1)]));
        // one-dimensional formal group of height n
        for n in 2..=8 {
            let h = newton(&[(1, n, 1)]);
            let e = bundle_of_pdiv(&h).unwrap();
            assert_eq!(e, hn(&[(1, n, 1)]));
            assert_eq!(e.rank(), n as u64);
            assert_eq!(e.degree(), 1);
        }
        assert!(bundle_of_pdiv(&newton(&[(3, 2, 1)])).is_err());
        assert!(bundle_of_pdiv(&newton(&[(-1, 2, 1)])).is_err());
    }

    fn random_pdiv(rng: &mut SplitMix64) -> NewtonSlopes {
        let k = rng.range_i64(1, 3);
        NewtonSlopes::new(
            (0..k)
                .map(|_| {
                    let den = rng.range_i64(1, 6);
                    let num = rng.range_i64(0, den);
                    (Slope::new(num, den).unwrap(), rng.below(3) + 1)
                })
                .collect(),
        )
    }

    #[test]
    fn pdiv_bundle_round_trips_to_input() {
        let mut rng = SplitMix64::new(41);
        for _ in 0..200 {
            let h = random_pdiv(&mut rng);
            let e = bundle_of_pdiv(&h).unwrap();
            let expected = HNType::new(h.slopes().to_vec());
            assert_eq!(e, expected, "slope multiset drifted for {h:?}");
            assert_eq!(
                e.all_slopes_positive(),
                !h.has_etale_part(),
                "positivity must detect the etale part"
            );
        }
    }

    #[test]
    fn section_dimensions() {
        assert_eq!(hn(&[(0, 1, 3)]).h0_dim(), H0Dim::Finite(3));
        assert_eq!(hn(&[(-1, 2, 1)]).h0_dim(), H0Dim::Finite(0));
        assert_eq!(hn(&[(0, 1, 2), (-1, 1, 5)]).h0_dim(), H0Dim::Finite(2));
        assert_eq!(hn(&[(1, 3, 1)]).h0_dim(), H0Dim::Infinite);
        assert_eq!(HNType::empty().h0_dim(), H0Dim::Finite(0));
        assert!(hn(&[(1, 3, 1)]).h1_vanishes());
        assert!(hn(&[(0, 1, 1), (1, 2, 1)]).h1_vanishes());
        assert!(!hn(&[(-1, 2, 1)]).h1_vanishes());
        assert!(hn(&[(1, 3, 1)]).all_slopes_positive());
        assert!(!hn(&[(0, 1, 1), (1, 2, 1)]).all_slopes_positive());
    }

    #[test]
    fn isoclinic_predicate() {
        assert!(newton(&[(1, 2, 3)]).is_isoclinic());
        assert!(!newton(&[(0, 1, 1), (1, 1, 1)]).is_isoclinic());
        assert_eq!(newton(&[(1, 2, 3)]).height(), 6);
    }

    #[test]
    fn json_round_trip_is_descending() {
        let t = hn(&[(0, 1, 2), (1, 2, 1), (-1, 3, 1)]);
        let j = t.to_json();
        let nums: Vec<i64> = j["summands"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s["num"].as_i64().unwrap())
            .collect();
        assert_eq!(nums, vec![1, 0, -1]);
        assert_eq!(HNType::from_json(&j).unwrap(), t);
        assert!(HNType::from_json(&serde_json::json!({"summands": [{"num": 1, "den": 0}]})).is_err());
    }
}
