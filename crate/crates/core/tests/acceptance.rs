//! Acceptance checklist for the whole workspace: eleven numbered criteria,
//! each a separate test so the harness prints one pass/fail line apiece.
//! Checks that have an independent route (a brute-force oracle, a hand
//! argument, a second computation path) always take it rather than trusting
//! the code path under test.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use hnlab::field::{FieldKind, Scalar};
use hnlab::hn::{bundle_of_pdiv, HNType, NewtonSlopes, Slope};
use hnlab::ktpoly::{KtMatrix, KtPoly};
use hnlab::local_model::{check_point, factor, suggest_chart, MatrixOverKt};
use hnlab::multilinear::{
    lemma_kernel_check, random_matrix, random_matrix_of_rank, trace_wedge_check,
};
use hnlab::p1::{jacobian_analysis, power_sum, random_section_tuple, sample_experiment};
use hnlab::rng::SplitMix64;
use hnlab::rz::{enumerate_profiles, profile_order, tangent_profiles, RZDatum};
use hnlab::tor::run_tor_trials;

const F101: FieldKind = FieldKind::Prime(101);
const Q: FieldKind = FieldKind::Rational;

fn slope(num: i64, den: i64) -> Slope {
    Slope::new(num, den).unwrap()
}

fn profile(pairs: &[(i64, i64, u64)]) -> HNType {
    HNType::new(pairs.iter().map(|&(n, d, m)| (slope(n, d), m)).collect())
}

fn cli(args: &[&str]) -> (i32, serde_json::Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_hnlab"))
        .arg("--json")
        .args(args)
        .output()
        .expect("binary runs");
    let code = out.status.code().expect("exit code");
    let parsed = serde_json::from_slice(&out.stdout).unwrap_or(serde_json::Value::Null);
    (code, parsed)
}

#[test]
fn c01_height_two_table() {
    let start = Instant::now();
    let (code, report) = cli(&["rz", "enumerate", "--height", "2", "--dim", "1"]);
    assert_eq!(code, 0);
    assert_eq!(report["pass"], serde_json::json!(true));

    let expected_special = profile(&[(1, 2, 1), (0, 1, 1)]);
    let expected_smooth = profile(&[(1, 3, 1)]);
    let enumerated = report["results"]["enumerated"].as_array().unwrap();
    assert_eq!(enumerated.len(), 2);
    assert_eq!(enumerated[0], expected_special.to_json());
    assert_eq!(enumerated[1], expected_smooth.to_json());

    let admissible = report["results"]["admissible"].as_array().unwrap();
    assert_eq!(admissible.len(), 2);
    assert_eq!(admissible[0]["hn"], expected_special.to_json());
    assert_eq!(admissible[0]["special"], serde_json::json!(true));
    assert_eq!(admissible[0]["smooth"], serde_json::json!(false));
    assert_eq!(admissible[1]["hn"], expected_smooth.to_json());
    assert_eq!(admissible[1]["special"], serde_json::json!(false));
    assert_eq!(admissible[1]["smooth"], serde_json::json!(true));

    assert!(start.elapsed().as_secs_f64() < 1.0, "took {:?}", start.elapsed());
    println!("criterion 1 pass: height-2 table is {{1/2, 0}} special and {{1/3}} smooth");
}

#[test]
fn c02_height_three_table() {
    let start = Instant::now();
    let datum = RZDatum::new(3, 1).unwrap();
    let (enumerated, admissible) = tangent_profiles(&datum, None).unwrap();

    let expected_all = vec![
        profile(&[(1, 3, 2), (0, 1, 2)]),
        profile(&[(1, 3, 1), (1, 4, 1), (0, 1, 1)]),
        profile(&[(1, 3, 1), (1, 5, 1)]),
        profile(&[(2, 7, 1), (0, 1, 1)]),
        profile(&[(1, 4, 2)]),
    ];
    assert_eq!(enumerated, expected_all);

    let survivors: Vec<&HNType> = admissible.iter().map(|t| &t.hn).collect();
    assert_eq!(
        survivors,
        vec![&expected_all[0], &expected_all[2], &expected_all[4]]
    );
    for t in &admissible {
        if t.hn == expected_all[0] {
            assert!(t.special && !t.smooth);
            assert_eq!(t.zero_mult, 2);
            assert_eq!(t.dim_ax, 3);
        } else {
            assert!(t.smooth && !t.special);
            assert_eq!(t.zero_mult, 0);
            assert_eq!(t.dim_ax, 1);
        }
    }

    assert!(start.elapsed().as_secs_f64() < 1.0, "took {:?}", start.elapsed());
    println!(
        "criterion 2 pass: height-3 table is 5 profiles, 3 admissible, dim A_x = 3 on {{1/3, 1/3, 0, 0}}"
    );
}

#[test]
fn c03_tangent_rank_degree() {
    for n in 2..=8u64 {
        let datum = RZDatum::new(n, 1).unwrap();
        assert_eq!(datum.tangent_rank_degree(), (n * n - 1, n as i64 - 1));
    }
    println!("criterion 3 pass: tangent bundle has rank n^2 - 1 and degree n - 1 for n = 2..8");
}

/// One shared conformance pass over the Fermat-quartic Jacobian sample;
/// criteria 4 and 5 both read it.
fn jacobian_sample(field: FieldKind, seed: u64) -> (u64, u64) {
    let p = power_sum(field, 3, 4);
    let mut rng = SplitMix64::new(seed);
    let (mut generic, mut jumped) = (0u64, 0u64);
    for _ in 0..500 {
        let g = random_section_tuple(field, 3, 1, &mut rng);
        let rep = jacobian_analysis(&p, &g, 1).unwrap();
        assert_eq!(rep.hom_dim, 12);
        assert!(rep.surjective);
        assert_eq!(rep.kernel.rank(), 2);
        assert_eq!(rep.kernel.degree(), -1);
        match rep.kernel.twists() {
            [0, -1] => {
                assert_eq!(rep.h0_kernel, 1);
                generic += 1;
            }
            [1, -2] => {
                assert_eq!(rep.h0_kernel, 2);
                jumped += 1;
            }
            other => panic!("unexpected kernel type {other:?}"),
        }
    }
    (generic, jumped)
}

#[test]
fn c04_jacobian_example_conformance() {
    let start = Instant::now();
    let (g1, j1) = jacobian_sample(F101, 1104);
    assert_eq!(g1 + j1, 500);
    let (g2, j2) = jacobian_sample(Q, 2104);
    assert_eq!(g2 + j2, 500);
    assert!(start.elapsed().as_secs_f64() < 30.0, "took {:?}", start.elapsed());
    println!(
        "criterion 4 pass: 500 samples per field conform (12-dim Hom, kernel rank 2 deg -1, h^0 detects the type)"
    );
}

#[test]
fn c05_generic_type_majority() {
    let table = sample_experiment(&power_sum(F101, 3, 4), 1, F101, 500, 1104).unwrap();
    assert_eq!(table.rejected, 0);
    let generic = table
        .counts
        .iter()
        .find(|(k, _)| k.twists() == [0, -1])
        .map_or(0, |(_, v)| *v);
    let jumped = table
        .counts
        .iter()
        .find(|(k, _)| k.twists() == [1, -2])
        .map_or(0, |(_, v)| *v);
    assert_eq!(generic + jumped, 500);
    assert!(generic > 0 && jumped > 0, "both types must occur: {generic}/{jumped}");
    assert!(generic > jumped, "balanced type must dominate: {generic}/{jumped}");
    println!(
        "criterion 5 pass: both kernel types occur and {{0, -1}} dominates ({generic} vs {jumped})"
    );
}

fn minor_trials(field: FieldKind, trials: u64, seed: u64) {
    let mut rng = SplitMix64::new(seed);
    for _ in 0..trials {
        let n = 1 + rng.below(5) as usize;
        let r = rng.below(n as u64 + 1) as usize;
        let f = random_matrix_of_rank(field, n, r, &mut rng);
        let rep = lemma_kernel_check(&f, r).unwrap();
        assert!(rep.holds, "n = {n}, r = {r}");
        assert_eq!(rep.dim_kernel, n * n - (n - r) * (n - r), "n = {n}, r = {r}");
        assert_eq!(rep.dim_k, rep.dim_kernel);
    }
}

#[test]
fn c06_minor_map_kernel_dimensions() {
    let start = Instant::now();
    minor_trials(F101, 500, 1106);
    minor_trials(Q, 500, 2106);
    assert!(start.elapsed().as_secs_f64() < 30.0, "took {:?}", start.elapsed());
    println!(
        "criterion 6 pass: minor-map kernel equals the induced-map kernel, dimension n^2 - (n-r)^2, 500 trials per field"
    );
}

#[test]
fn c07_trace_wedge_identity() {
    let mut rng = SplitMix64::new(1107);
    for _ in 0..500 {
        let n = 1 + rng.below(5) as usize;
        let alpha = random_matrix(Q, n, n, &mut rng);
        let s = random_matrix(Q, n, n, &mut rng);
        let rep = trace_wedge_check(&alpha, &s).unwrap();
        assert!(rep.equal, "lhs {} != rhs {}", rep.lhs, rep.rhs);
    }
    println!("criterion 7 pass: trace-wedge identity exact on 500 rational instances");
}

#[test]
fn c08_tensor_complex_homology() {
    let summary = run_tor_trials(F101, 300, 1108).unwrap();
    assert_eq!(summary.trials, 300);
    assert!(summary.all_hold, "passes {} of {}", summary.passes, summary.trials);
    println!(
        "criterion 8 pass: H_2 = 0, H_1 = Tor_1, H_0 = tensor product on 300 random complexes"
    );
}

/// A guaranteed member: unitriangular L and U around a diagonal with `t` at
/// `d` random slots, so det has valuation exactly d and the reduction mod t
/// has rank exactly n - d.
fn random_member(n: usize, d: usize, rng: &mut SplitMix64) -> MatrixOverKt {
    let coeff = |rng: &mut SplitMix64| Scalar::from_i64(F101, rng.below(101) as i64);
    let mut lower = KtMatrix::identity(F101, n);
    let mut upper = KtMatrix::identity(F101, n);
    for i in 0..n {
        for j in 0..i {
            lower[(i, j)] = KtPoly::from_coeffs(F101, vec![coeff(rng), coeff(rng)]).unwrap();
            upper[(j, i)] = KtPoly::from_coeffs(F101, vec![coeff(rng), coeff(rng)]).unwrap();
        }
    }
    let mut slots: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        slots.swap(i, rng.below(i as u64 + 1) as usize);
    }
    let diag: Vec<KtPoly> = (0..n)
        .map(|i| {
            if slots[..d].contains(&i) {
                KtPoly::t(F101)
            } else {
                KtPoly::one(F101)
            }
        })
        .collect();
    let mat = lower
        .mul(&KtMatrix::diagonal(F101, &diag))
        .unwrap()
        .mul(&upper)
        .unwrap();
    MatrixOverKt::new(d, mat).unwrap()
}

#[test]
fn c09_local_model_round_trip() {
    let mut rng = SplitMix64::new(1109);
    for _ in 0..300 {
        let n = 2 + rng.below(3) as usize;
        let d = 1 + rng.below(n as u64) as usize;
        let m = random_member(n, d, &mut rng);
        assert!(check_point(&m).unwrap().member);
        let block = match factor(&m, None) {
            Ok(b) => b,
            Err(hnlab::Error::ChartFailure(_)) => {
                factor(&m, Some(&suggest_chart(&m))).unwrap()
            }
            Err(e) => panic!("{e}"),
        };
        assert_eq!(block.reconstruct(), *m.matrix(), "n = {n}, d = {d}");
        assert!(block.det_identity_holds(&m).unwrap());
        let q0 = block.q_block.constant_term_matrix().det().unwrap();
        assert!(!q0.is_zero(), "det Q must be a unit at t = 0");
    }
    println!(
        "criterion 9 pass: 300 member matrices factor to [[I, P], [0, tQ]] and reconstruct exactly, det Q unit at 0"
    );
}

#[test]
fn c10_slope_dictionary() {
    let mut rng = SplitMix64::new(1110);
    for _ in 0..200 {
        let pairs: Vec<(Slope, u64)> = (0..1 + rng.below(3))
            .map(|_| {
                let den = 1 + rng.below(6) as i64;
                let num = rng.below(den as u64 + 1) as i64;
                (slope(num, den), 1 + rng.below(3))
            })
            .collect();
        let h = NewtonSlopes::new(pairs);
        let bundle = bundle_of_pdiv(&h).unwrap();
        let mut expected: Vec<(Slope, u64)> = h.slopes().to_vec();
        expected.reverse();
        assert_eq!(bundle.summands(), expected, "group slopes {h:?}");
    }
    for n in 1..=8 {
        let one_dim = NewtonSlopes::single(1, n, 1).unwrap();
        let bundle = bundle_of_pdiv(&one_dim).unwrap();
        assert_eq!(bundle.summands(), [(slope(1, n), 1)]);
    }
    println!(
        "criterion 10 pass: group-to-bundle slope dictionary is the identity on 200 random types and 1/n"
    );
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

/// Brute-force composition search, structured opposite to the production
/// enumerator: candidates ascending, a plain choose-multiplicity recursion
/// with no degree pruning, results bucketed by total degree.
fn oracle_enumerate(rank: u64, lo: &Slope, hi: &Slope) -> BTreeMap<i64, Vec<HNType>> {
    let mut cands: Vec<(i64, i64)> = Vec::new();
    for b in 1..=rank as i64 {
        let amin = div_ceil(lo.num() * b, lo.den() as i64);
        let amax = div_floor(hi.num() * b, hi.den() as i64);
        for a in amin..=amax {
            if gcd(a.abs(), b) == 1 {
                cands.push((a, b));
            }
        }
    }
    cands.sort_by(|x, y| (x.0 * y.1).cmp(&(y.0 * x.1)));
    let mut buckets = BTreeMap::new();
    let mut stack = Vec::new();
    oracle_search(&cands, 0, rank, 0, &mut stack, &mut buckets);
    buckets
}

fn oracle_search(
    cands: &[(i64, i64)],
    idx: usize,
    rem: u64,
    deg: i64,
    stack: &mut Vec<(Slope, u64)>,
    out: &mut BTreeMap<i64, Vec<HNType>>,
) {
    if rem == 0 {
        out.entry(deg).or_default().push(HNType::new(stack.clone()));
        return;
    }
    if idx == cands.len() {
        return;
    }
    let (a, b) = cands[idx];
    oracle_search(cands, idx + 1, rem, deg, stack, out);
    let mut mult = 1u64;
    while mult * b as u64 <= rem {
        stack.push((slope(a, b), mult));
        oracle_search(cands, idx + 1, rem - mult * b as u64, deg + mult as i64 * a, stack, out);
        stack.pop();
        mult += 1;
    }
}

type BoundsPair = ((i64, i64), (i64, i64));

#[test]
fn c11_enumerator_matches_composition_oracle() {
    // Bound pairs covering every denominator up to 8, plus degenerate
    // single-point and empty ranges.
    let grid: &[BoundsPair] = &[
        ((-1, 1), (1, 1)),
        ((0, 1), (1, 1)),
        ((1, 1), (1, 1)),
        ((-1, 1), (0, 1)),
        ((-1, 2), (1, 2)),
        ((0, 1), (1, 2)),
        ((1, 2), (3, 2)),
        ((-1, 3), (1, 3)),
        ((-1, 3), (2, 3)),
        ((1, 3), (1, 3)),
        ((1, 2), (1, 3)),
        ((-1, 4), (1, 4)),
        ((-3, 4), (1, 4)),
        ((-1, 5), (1, 5)),
        ((0, 1), (2, 5)),
        ((-6, 5), (-1, 5)),
        ((-1, 6), (1, 6)),
        ((-1, 6), (5, 6)),
        ((-1, 7), (2, 7)),
        ((0, 1), (1, 7)),
        ((-1, 8), (1, 8)),
        ((-1, 8), (3, 8)),
        ((3, 8), (7, 8)),
    ];
    let mut compared = 0u64;
    let mut nonempty = 0u64;
    for &((ln, ld), (hn, hd)) in grid {
        let lo = slope(ln, ld);
        let hi = slope(hn, hd);
        for rank in 1..=12u64 {
            let mut buckets = oracle_enumerate(rank, &lo, &hi);
            for degree in -6..=6i64 {
                let mut expected = buckets.remove(&degree).unwrap_or_default();
                expected.sort_by(profile_order);
                let got = enumerate_profiles(rank, degree, &lo, &hi).unwrap();
                assert_eq!(
                    got, expected,
                    "rank {rank}, degree {degree}, bounds [{lo}, {hi}]"
                );
                compared += 1;
                if !got.is_empty() {
                    nonempty += 1;
                }
            }
        }
    }
    assert!(nonempty > 500, "grid must exercise nontrivial cases: {nonempty}");
    println!(
        "criterion 11 pass: enumerator matches the brute-force oracle on {compared} (rank, degree, bounds) cells"
    );
}
