//! Acceptance gate: one line per criterion. Runs without the libtest harness
//! so that the report is always printed.
//!
//! Exit status is nonzero when a criterion fails, unless the failure is one
//! of the [`KNOWN_DIVERGENCES`], which are still reported as FAIL.

use std::cell::RefCell;
use std::process::ExitCode;
use std::rc::Rc;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use ehrhart_core::ehrhart::{ehrhart_with_schedule, Schedule};
use ehrhart_core::oracles::{enumerate_ssyt, OracleBudget};
use ehrhart_core::poset::search_nonrealrooted_until;
use ehrhart_core::{
    birkhoff_ehrhart, gt_dimension, gt_ehrhart, hstar_from_ehrhart, hstar_via_linext, kostka, magic_square_count,
    order_polytope_ehrhart, permutation_hstar, strict_kostka, Error, GTChainSpec, GtEvaluator, HStarVector,
    Partition, Permutation, Poset, SkewShape, WeightVector,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criterion 11 thresholds: a warning above the target, a failure above 100x
/// the reference time.
const GT_4321_WARN: Duration = Duration::from_secs(5);
const GT_4321_FAIL: Duration = Duration::from_millis(10_400);
const GT_333_WARN: Duration = Duration::from_secs(1);
const GT_333_FAIL: Duration = Duration::from_millis(100);
const B34_LIMIT: Duration = Duration::from_secs(1);
const B5_LIMIT: Duration = Duration::from_secs(30);
const SEARCH_BUDGET: Duration = Duration::from_secs(2 * 3600);
const S28_BUDGET: Duration = Duration::from_secs(30 * 60);

/// Criteria whose stated value is contradicted by exact computation; see
/// `strict_zeros_4321` for the evidence printed with the failure.
const KNOWN_DIVERGENCES: &[&str] = &["3a"];

const W0: &str = "2,4,6,8,10,1,12,3,15,5,17,7,9,11,13,14,16";
const W321: &str = "3,4,6,8,10,12,2,1,15,5,17,7,9,11,13,14,16";
const W28: &str = "9,10,1,2,3,4,5,12,15,16,17,18,19,6,7,8,11,20,21,22,23,13,25,26,27,28,14,24";

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Warn,
    Skip,
    Fail,
}

struct Outcome {
    status: Status,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        status: Status::Pass,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        status: Status::Fail,
        detail: detail.into(),
    }
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    if ok {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn gt(lambda: &str, mu: &str, w: &str) -> GTChainSpec {
    GTChainSpec::new(
        SkewShape::new(lambda.parse().unwrap(), mu.parse().unwrap()).unwrap(),
        w.parse().unwrap(),
    )
}

fn hstar(coeffs: &[i64]) -> HStarVector {
    HStarVector::from_i64s(coeffs.iter().copied())
}

fn kostka_oracle() -> Outcome {
    let mut cases = 0;
    for n in 0..=6 {
        for lambda in Partition::all_of(n) {
            for mu in lambda.subpartitions() {
                let size = (lambda.size() - mu.size()) as u32;
                let weights = if size == 0 {
                    vec![WeightVector::from_parts(vec![])]
                } else {
                    WeightVector::compositions(size)
                };
                let shape = SkewShape::new(lambda.clone(), mu.clone()).unwrap();
                for w in weights {
                    let spec = GTChainSpec::new(shape.clone(), w.clone());
                    let direct = enumerate_ssyt(&shape, &w, OracleBudget::default()).unwrap();
                    if kostka(&spec) != direct {
                        return fail(format!("{shape} {w}: dp {} vs enumeration {direct}", kostka(&spec)));
                    }
                    cases += 1;
                }
            }
        }
    }
    pass(format!("{cases} (λ, μ, w) cases agree"))
}

fn dimension_table() -> Outcome {
    let rows = [
        ("8,1,1", "2,1^8", 12),
        ("4,4,2", "2,1^8", 12),
        ("4,3,3", "2,1^8", 12),
        ("5,3,2", "2,1^8", 13),
        ("7,2,1", "2,1^8", 13),
        ("7,1,1,1", "2,1^8", 15),
        ("4,2,2,2", "2,1^8", 15),
        ("3,3,3,1", "2,1^8", 15),
        ("5,2,2,1", "2,1^8", 17),
        ("5,3,1,1", "2,1^8", 17),
        ("4,3,2,1", "1^10", 21),
        ("5,5,5", "1^15", 22),
        ("5,3,3,1,1,1", "2^4,1^6", 26),
        ("3,2,1", "1^6", 7),
        ("3,3,3", "1^9", 10),
        ("4,3,2", "1^9", 13),
    ];
    let bad: Vec<String> = rows
        .iter()
        .filter_map(|&(l, w, d)| {
            let got = gt_dimension(&gt(l, "", w)).unwrap().0;
            (got != d).then(|| format!("({l}) ({w}): {got} != {d}"))
        })
        .collect();
    check(bad.is_empty(), format!("{} rows; mismatches: {bad:?}", rows.len()))
}

/// The strict counts of `GT((4,3,2,1), 1^10)` vanish only for `n <= 6`.
/// The value at `n = 7` is confirmed through reciprocity from a polynomial
/// built from positive dilations alone, which never calls the strict DP.
fn strict_zeros_4321() -> (Outcome, Outcome) {
    let spec = gt("4,3,2,1", "", "1^10");
    let (d, mask) = gt_dimension(&spec).unwrap();
    let strict: Vec<BigUint> = (1..=9).map(|n| strict_kostka(&spec, &mask, n)).collect();
    let zeros = strict.iter().take_while(|v| v.is_zero()).count();
    let ev = GtEvaluator::new(spec.clone()).unwrap();
    let positive = ehrhart_with_schedule(&ev, Schedule::PositiveOnly).unwrap();
    let sign = if d % 2 == 1 { -1 } else { 1 };
    let via_reciprocity: Vec<BigInt> = (1..=9)
        .map(|n| sign * positive.polynomial.eval_integer(-n).unwrap())
        .collect();
    let consistent = strict.iter().zip(&via_reciprocity).all(|(a, b)| BigInt::from(a.clone()) == *b);
    let zeros_claim = Outcome {
        status: if zeros >= 9 { Status::Pass } else { Status::Fail },
        detail: format!(
            "strict counts vanish for n = 1..{zeros} only; n = 7, 8, 9 give {}, {}, {}; \
             reciprocity from positive points alone {} these values",
            strict[6],
            strict[7],
            strict[8],
            if consistent { "reproduces" } else { "does NOT reproduce" }
        ),
    };
    let comp = gt_ehrhart(&spec, true).unwrap();
    let points = comp.transcript.len();
    let free = comp.free_points();
    let transcript_claim = check(
        points == 22 && comp.polynomial == positive.polynomial,
        format!("adaptive transcript has {points} points ({free} free zeros); agrees with the positive-only polynomial"),
    );
    (zeros_claim, transcript_claim)
}

fn reciprocity_round_trip() -> Outcome {
    let mut specs: Vec<GTChainSpec> = Vec::new();
    for n in 2..=6u32 {
        for lambda in Partition::all_of(n) {
            specs.push(GTChainSpec::new(SkewShape::straight(lambda), WeightVector::from_parts(vec![1; n as usize])));
        }
    }
    for (l, m, w) in [
        ("4,3,1", "2,1", "2,2,1"),
        ("4,4,2", "2,1", "3,2,2"),
        ("5,3,2", "1", "2,2,2,2,1"),
        ("3,3,3", "1,1", "2,2,1,1,1"),
        ("4,2,2", "", "2,2,2,2"),
        ("5,4", "", "3,3,3"),
    ] {
        specs.push(gt(l, m, w));
    }
    let mut tested = 0;
    for spec in &specs {
        let comp = match gt_ehrhart(spec, true) {
            Ok(c) => c,
            Err(Error::EmptyPolytope) => continue,
            Err(e) => return fail(format!("{} {}: {e}", spec.shape(), spec.weight())),
        };
        let d = comp.dimension;
        if d == 0 || d > 12 {
            continue;
        }
        let (_, mask) = gt_dimension(spec).unwrap();
        // beyond both the transcript and the verification points
        let n = comp.transcript.iter().map(|p| p.x.abs()).max().unwrap() + 2;
        let lhs = if d % 2 == 1 { -1 } else { 1 } * comp.polynomial.eval_integer(-n).unwrap();
        let rhs = BigInt::from(strict_kostka(spec, &mask, n as u32));
        if lhs != rhs {
            return fail(format!("{} {}: (-1)^d L(-{n}) = {lhs}, strict {rhs}", spec.shape(), spec.weight()));
        }
        tested += 1;
    }
    check(tested >= 20, format!("{tested} specs with 1 <= d <= 12, exact at a fresh n"))
}

fn positivity_sweep() -> Outcome {
    let mut cases = 0;
    let mut bad = Vec::new();
    for n in 1..=8u32 {
        for lambda in Partition::all_of(n) {
            let spec = GTChainSpec::new(SkewShape::straight(lambda.clone()), WeightVector::from_parts(vec![1; n as usize]));
            let comp = gt_ehrhart(&spec, true).unwrap();
            let h = hstar_from_ehrhart(&comp.polynomial).unwrap();
            if !comp.polynomial.has_nonnegative_coeffs() || !h.is_nonnegative() {
                bad.push(lambda.to_string());
            }
            cases += 1;
        }
    }
    check(bad.is_empty(), format!("{cases} straight shapes with N <= 8; violations: {bad:?}"))
}

fn fence_hstar() -> Outcome {
    let expected = hstar(&[1, 133, 2475, 12331, 20641, 12331, 2475, 133, 1]);
    let p = Poset::fence(10);
    let via_reciprocity = hstar_from_ehrhart(&order_polytope_ehrhart(&p).unwrap().polynomial).unwrap();
    let via_linext = hstar_via_linext(&p);
    check(
        via_reciprocity.trimmed() == expected.trimmed() && via_linext.trimmed() == expected.trimmed(),
        format!("reciprocity {via_reciprocity}, linear extensions {via_linext}"),
    )
}

fn random_poset(rng: &mut ChaCha8Rng) -> Poset {
    let n = rng.gen_range(1..=10);
    let p = rng.gen_range(0.1..0.6);
    let relations: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Poset::from_relations(n, &relations).unwrap()
}

fn stanley_cross_check() -> Outcome {
    let mut posets = Vec::new();
    for n in 1..=10 {
        posets.push((format!("chain:{n}"), Poset::chain(n)));
        posets.push((format!("antichain:{n}"), Poset::antichain(n)));
        posets.push((format!("fence:{n}"), Poset::fence(n)));
    }
    for n in 1..=10 {
        for lambda in Partition::all_of(n) {
            posets.push((format!("shape:{lambda}"), Poset::shape_poset(&lambda).unwrap()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..50 {
        posets.push((format!("random #{i}"), random_poset(&mut rng)));
    }
    for (name, p) in &posets {
        let a = hstar_via_linext(p);
        let b = hstar_from_ehrhart(&order_polytope_ehrhart(p).unwrap().polynomial).unwrap();
        if a.trimmed() != b.trimmed() {
            return fail(format!("{name}: linext {a} vs reciprocity {b}"));
        }
    }
    pass(format!("{} posets (50 random) agree", posets.len()))
}

fn permutation_fixtures() -> Outcome {
    let w0: Permutation = W0.parse().unwrap();
    let w321: Permutation = W321.parse().unwrap();
    let (h0, f0) = permutation_hstar(&w0).unwrap();
    let (h1, f1) = permutation_hstar(&w321).unwrap();
    let ok0 = h0.trimmed() == hstar(&[1, 32, 336, 1420, 2534, 1946, 658, 86, 3]).trimmed()
        && f0.ultra_log_concave
        && !f0.real_rooted;
    let ok1 = h1.trimmed() == hstar(&[1, 41, 525, 2596, 5349, 4731, 1849, 284, 12]).trimmed()
        && !f1.real_rooted
        && w321.contains_pattern(&"3,2,1".parse().unwrap());
    check(ok0 && ok1, format!("w0: {h0} ULC {} RR {}; 321-containing: {h1} RR {}", f0.ultra_log_concave, f0.real_rooted, f1.real_rooted))
}

fn neighborhood_search() -> Outcome {
    let w0: Permutation = W0.parse().unwrap();
    let avoid: Permutation = "4,3,2,1".parse().unwrap();
    let p321: Permutation = "3,2,1".parse().unwrap();
    let start = Instant::now();
    match search_nonrealrooted_until(&w0, 3, &avoid, Some(start + SEARCH_BUDGET)) {
        Ok(out) => {
            let all_ulc = out.hits.iter().all(|h| h.flags.ultra_log_concave);
            let with_321: Vec<_> = out.hits.iter().filter(|h| h.permutation.contains_pattern(&p321)).collect();
            let w321: Permutation = W321.parse().unwrap();
            check(
                out.candidates == 34_226 && out.hits.len() == 22 && all_ulc && with_321.len() == 1 && with_321[0].permutation == w321,
                format!(
                    "{} candidates, {} non-real-rooted, all ULC: {all_ulc}, 321-containing: {:?} ({:.0} s)",
                    out.candidates,
                    out.hits.len(),
                    with_321.iter().map(|h| h.permutation.to_string()).collect::<Vec<_>>(),
                    start.elapsed().as_secs_f64()
                ),
            )
        }
        Err(Error::BudgetExceeded(_)) => {
            let out = search_nonrealrooted_until(&w0, 2, &avoid, None).unwrap();
            let ok = out.hits.len() <= 22
                && out.hits.iter().all(|h| h.flags.ultra_log_concave && !h.permutation.contains_pattern(&p321));
            Outcome {
                status: if ok { Status::Skip } else { Status::Fail },
                detail: format!(
                    "radius 3 exceeded {} s; radius 2: {} candidates, {} non-real-rooted, all ULC and 321-avoiding: {ok}",
                    SEARCH_BUDGET.as_secs(),
                    out.candidates,
                    out.hits.len()
                ),
            }
        }
        Err(e) => fail(e.to_string()),
    }
}

fn birkhoff_checks() -> Outcome {
    let mut notes = Vec::new();
    for ell in [3u32, 4] {
        let start = Instant::now();
        let comp = birkhoff_ehrhart(ell).unwrap();
        let elapsed = start.elapsed();
        let p = &comp.polynomial;
        let fact: u64 = (1..=u64::from(ell)).product();
        let mut ok = p.eval_integer(1) == Some(BigInt::from(fact)) && p.eval_integer(0) == Some(BigInt::from(1));
        ok &= (1..i64::from(ell)).all(|t| p.eval_integer(-t) == Some(BigInt::zero()));
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        let mirrored = p.compose_linear(&q(-i64::from(ell)), &q(-1));
        let sign = if (ell - 1) % 2 == 0 { q(1) } else { q(-1) };
        ok &= mirrored == p.scale(&sign);
        ok &= (0..=5).all(|t| p.eval_integer(t as i64) == Some(BigInt::from(magic_square_count(ell, t).unwrap())));
        ok &= elapsed < B34_LIMIT;
        if !ok {
            return fail(format!("B_{ell}: {p}"));
        }
        notes.push(format!("B_{ell} {:.1} ms", elapsed.as_secs_f64() * 1e3));
    }
    let start = Instant::now();
    let b5 = birkhoff_ehrhart(5).unwrap();
    let elapsed = start.elapsed();
    notes.push(format!("B_5 {:.1} ms, L(1) = {}", elapsed.as_secs_f64() * 1e3, b5.polynomial.eval_integer(1).unwrap()));
    check(elapsed < B5_LIMIT, notes.join("; "))
}

fn timed(spec: &GTChainSpec) -> Duration {
    let start = Instant::now();
    gt_ehrhart(spec, true).unwrap();
    start.elapsed()
}

fn performance_smoke() -> Outcome {
    let t4321 = timed(&gt("4,3,2,1", "", "1^10"));
    let t333 = timed(&gt("3,3,3", "", "1^9"));
    let detail = format!(
        "(4,3,2,1)/1^10 {:.1} ms (warn {} s, fail {} s); (3,3,3)/1^9 {:.2} ms (warn {} s, fail {} ms)",
        t4321.as_secs_f64() * 1e3,
        GT_4321_WARN.as_secs(),
        GT_4321_FAIL.as_secs_f64(),
        t333.as_secs_f64() * 1e3,
        GT_333_WARN.as_secs(),
        GT_333_FAIL.as_millis()
    );
    let status = if t4321 > GT_4321_FAIL || t333 > GT_333_FAIL {
        Status::Fail
    } else if t4321 > GT_4321_WARN || t333 > GT_333_WARN {
        Status::Warn
    } else {
        Status::Pass
    };
    Outcome { status, detail }
}

fn s28_fixture() -> Outcome {
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let w: Permutation = W28.parse().unwrap();
        let _ = tx.send(permutation_hstar(&w));
    });
    match rx.recv_timeout(S28_BUDGET) {
        Ok(Ok((h, f))) => {
            let expected = hstar(&[1, 66, 1500, 15582, 81644, 223486, 320052, 232424, 77660, 8560]);
            check(
                h.trimmed() == expected.trimmed() && f.ultra_log_concave && !f.real_rooted,
                format!("{h}, ULC {}, real-rooted {}", f.ultra_log_concave, f.real_rooted),
            )
        }
        Ok(Err(e)) => fail(e.to_string()),
        Err(_) => Outcome {
            status: Status::Skip,
            detail: format!("not finished within {} s", S28_BUDGET.as_secs()),
        },
    }
}

fn main() -> ExitCode {
    // `cargo test -- --list` and friends
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let transcript = Rc::new(RefCell::new(None));
    let stash = Rc::clone(&transcript);
    let criteria: Vec<(&str, &str, Box<dyn FnOnce() -> Outcome>)> = vec![
        ("1", "Kostka DP equals tableau enumeration, |λ| <= 6", Box::new(kostka_oracle)),
        ("2", "GT dimensions of the benchmark tables", Box::new(dimension_table)),
        ("3a", "strict Kostka zero for n = 1..9 on (4,3,2,1)/1^10", Box::new(move || {
            let (zeros, points) = strict_zeros_4321();
            *stash.borrow_mut() = Some(points);
            zeros
        })),
        ("3b", "22-point adaptive transcript for (4,3,2,1)/1^10", Box::new(move || transcript.borrow_mut().take().expect("3a ran"))),
        ("4", "reciprocity round trip at fresh dilations", Box::new(reciprocity_round_trip)),
        ("5", "Ehrhart and h* positivity, λ ⊢ N <= 8, w = 1^N", Box::new(positivity_sweep)),
        ("6", "fence(10) h* by both methods", Box::new(fence_hstar)),
        ("7", "Stanley's theorem cross-check", Box::new(stanley_cross_check)),
        ("8", "permutation-poset h* fixtures in S_17", Box::new(permutation_fixtures)),
        ("9", "radius-3 neighborhood search around w0", Box::new(neighborhood_search)),
        ("10", "Birkhoff B_3, B_4 identities and B_5 time", Box::new(birkhoff_checks)),
        ("11", "GT performance smoke", Box::new(performance_smoke)),
        ("12", "S_28 permutation-poset h*", Box::new(s28_fixture)),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let out = run();
        let label = match out.status {
            Status::Pass => "PASS",
            Status::Warn => "WARN",
            Status::Skip => "SKIP",
            Status::Fail if KNOWN_DIVERGENCES.contains(&id) => "FAIL (known divergence)",
            Status::Fail => "FAIL",
        };
        println!(
            "criterion {id:<3} {label:<24} {name} [{:.1} s]: {}",
            start.elapsed().as_secs_f64(),
            out.detail
        );
        if out.status == Status::Fail && !KNOWN_DIVERGENCES.contains(&id) {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
