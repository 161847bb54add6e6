//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero
//! exit if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ksumlab::algebra::{rat, ratio};
use ksumlab::elimination::{
    fourteenth_quadratic, residual_relations, s7_condition_expected, s7_condition_polynomial,
    second_root, second_root_numerator, second_root_numerator_expected,
};
use ksumlab::search::Searcher;
use ksumlab::symfunc::fixture::{check_against_fixtures, load_reference_fixtures};
use ksumlab::{
    e_expansion, e_expansion_unreduced, e_power_sums, find_collisions, ksums, macmahon_reduce,
    monomial_power_sum_direct, power_sum, power_sum_vector, reduce_monomial, verify_record,
    CollisionRecord, Composition, Family, Monomial, NumberMultiset, SearchSpec,
    SparsePolynomial,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn set(text: &str) -> NumberMultiset {
    text.parse().unwrap()
}

fn a_prime() -> NumberMultiset {
    set("0^2 -1 1 -2 2 -4 4 -7^2 7^2")
}

fn a_double_prime() -> NumberMultiset {
    set("-1 1 -2 2 -3 3 -4 4 -5 5 -8 8")
}

fn example_one() -> NumberMultiset {
    set("-1 0^10 1")
}

fn poly(text: &str) -> SparsePolynomial {
    text.parse().unwrap()
}

fn random_set(rng: &mut ChaCha8Rng) -> NumberMultiset {
    NumberMultiset::from_integers(&(0..12).map(|_| rng.random_range(-9..=9)).collect::<Vec<i64>>()).unwrap()
}

fn counterexample() -> Outcome {
    let x = ksums(&a_prime(), 4).map_err(|e| e.to_string())?;
    let y = ksums(&a_double_prime(), 4).map_err(|e| e.to_string())?;
    ensure(x.len() == 495 && y.len() == 495, || format!("sizes {} and {}", x.len(), y.len()))?;
    ensure(x == y, || format!("first difference {:?}", x.first_difference(&y)))?;
    ensure(a_prime() != a_double_prime(), || "sets coincide".into())
}

fn example_one_fixture() -> Outcome {
    let a = example_one();
    let sums = ksums(&a, 4).map_err(|e| e.to_string())?;
    ensure(sums.to_literal() == "-1^120 0^255 1^120", || sums.to_literal())?;
    let e = e_power_sums(&a, 4, 14).map_err(|e| e.to_string())?;
    for p in 1..=14 {
        let want = if p % 2 == 1 { rat(0) } else { rat(240) };
        ensure(e.get(p) == &want, || format!("E{p} = {}", e.get(p)))?;
    }
    let q = fourteenth_quadratic().map_err(|e| e.to_string())?;
    let roots = q.at(&e.bindings(Family::E)).map_err(|e| e.to_string())?.rational_roots();
    ensure(roots == Some(vec![rat(2), ratio(377762, 44361)]), || format!("roots {roots:?}"))
}

fn identity_regression() -> Outcome {
    let fixtures = load_reference_fixtures().map_err(|e| e.to_string())?;
    ensure(fixtures.len() == 13, || format!("{} reference identities", fixtures.len()))?;
    for &p in fixtures.keys() {
        let checks = check_against_fixtures(p, &fixtures).map_err(|e| e.to_string())?;
        if let Some(bad) = checks.iter().find(|c| !c.ok()) {
            return Err(format!("E{p}: {bad}"));
        }
    }
    let e = |p| e_expansion(p, 4, 12, true).unwrap();
    ensure(e(2) == poly("120*S2"), || format!("E2 = {}", e(2)))?;
    ensure(e(3) == poly("48*S3"), || format!("E3 = {}", e(3)))?;
    let s6: Monomial = "S6".parse().unwrap();
    ensure(e(6).coefficient(&s6).is_zero() && fixtures[&6].terms.iter().any(|(m, _)| m == &s6), || {
        "E6: S6 term".into()
    })?;
    let s12: Monomial = "S12".parse().unwrap();
    ensure(e(12).coefficient(&s12) == rat(-2203488), || format!("E12 S12 coefficient {}", e(12).coefficient(&s12)))?;
    let e14 = e_expansion_unreduced(14, 4, 12, true).map_err(|e| e.to_string())?;
    ensure(e14.len() == 26 && fixtures[&14].terms.len() == 26, || format!("E14 has {} terms", e14.len()))
}

fn refutation_coefficients() -> Outcome {
    let q = fourteenth_quadratic().map_err(|e| e.to_string())?;
    ensure(q.c2 == poly("73458/5465*E2"), || format!("c2 = {}", q.c2))?;
    let checks = q.verify_coefficients();
    ensure(checks.len() == 7, || format!("{} checks", checks.len()))?;
    if let Some(bad) = checks.iter().find(|c| !c.ok()) {
        return Err(bad.to_string());
    }
    let key: Monomial = "E2^2*E4".parse().unwrap();
    let got = q.c1.coefficient(&key);
    ensure(got == ratio(4783550233, 119441640960), || format!("coef(E2^2*E4) = {got}"))
}

fn closed_forms() -> Outcome {
    let sv = power_sum_vector(&example_one(), 12);
    let root = second_root(&sv).map_err(|e| e.to_string())?;
    ensure(root == ratio(377762, 44361), || format!("S6'' = {root}"))?;
    let derived = second_root_numerator().map_err(|e| e.to_string())?;
    ensure(derived == second_root_numerator_expected(), || "S6'' closed form differs".into())?;
    let s7 = s7_condition_polynomial().map_err(|e| e.to_string())?;
    ensure(s7 == s7_condition_expected(), || format!("S7' condition {s7}"))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let expansions: Vec<SparsePolynomial> =
        (1..=26).map(|p| e_expansion(p, 4, 12, false)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let reductions: Vec<SparsePolynomial> =
        (13..=26).map(|m| macmahon_reduce(m, 12)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    for trial in 0..24 {
        let a = random_set(&mut rng);
        let s = power_sum_vector(&a, 12).bindings(Family::S);
        let e = e_power_sums(&a, 4, 26).map_err(|e| e.to_string())?;
        for (p, poly) in (1..=26).zip(&expansions) {
            let got = poly.eval(&s).map_err(|e| e.to_string())?;
            ensure(&got == e.get(p), || format!("trial {trial}, {a}: E{p} {got} vs {}", e.get(p)))?;
        }
        for (m, poly) in (13..=26).zip(&reductions) {
            let got = poly.eval(&s).map_err(|e| e.to_string())?;
            ensure(got == power_sum(&a, m), || format!("trial {trial}, {a}: S{m}"))?;
        }
        for _ in 0..10 {
            let parts: Vec<u32> = loop {
                let len = rng.random_range(1..=5);
                let parts: Vec<u32> = (0..len).map(|_| rng.random_range(1..=6)).collect();
                if parts.iter().sum::<u32>() <= 10 {
                    break parts;
                }
            };
            let c = Composition::new(&parts);
            let got = reduce_monomial(&c).eval(&s).map_err(|e| e.to_string())?;
            let want = monomial_power_sum_direct(&a, &c).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("trial {trial}, {a}: S{parts:?}"))?;
        }
    }
    Ok(())
}

fn residual_certification() -> Outcome {
    for a in [a_prime(), a_double_prime()] {
        let res = residual_relations(&power_sum_vector(&a, 12), 26).map_err(|e| e.to_string())?;
        ensure(res.len() == 13 && res.iter().all(|r| r.value.is_zero()), || format!("{a}: {res:?}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tried = 0;
    while tried < 12 {
        let a = random_set(&mut rng);
        let shift = -(a.sum() / rat(12));
        let centred = a.affine(&rat(1), &shift);
        let sv = power_sum_vector(&centred, 12);
        if sv.get(2).is_zero() {
            continue;
        }
        tried += 1;
        let res = residual_relations(&sv, 26).map_err(|e| e.to_string())?;
        ensure(res.iter().any(|r| !r.value.is_zero()), || format!("{a}: all residuals vanish"))?;
    }
    Ok(())
}

fn twelve_four(bound: u32) -> SearchSpec {
    SearchSpec { n: 12, k: 4, bound, symmetric_only: true, dedupe_affine: true }
}

fn general(n: usize, k: usize, bound: u32) -> SearchSpec {
    SearchSpec { n, k, bound, symmetric_only: false, dedupe_affine: true }
}

fn search_rediscovery() -> Outcome {
    let records = find_collisions(&twelve_four(8)).map_err(|e| e.to_string())?;
    let pair = CollisionRecord::new(a_prime(), a_double_prime(), 4).unwrap().canonical();
    ensure(records == vec![pair], || format!("{} records: {records:?}", records.len()))?;
    ensure(records.iter().all(verify_record), || "record fails verification".into())?;

    let records = find_collisions(&general(4, 2, 7)).map_err(|e| e.to_string())?;
    let pair = CollisionRecord::new(set("0 3 5 6"), set("1 2 4 7"), 2).unwrap().canonical();
    ensure(records.contains(&pair), || "{0,3,5,6}/{1,2,4,7} missing".into())?;
    ensure(records.iter().all(verify_record), || "record fails verification".into())?;

    let records = find_collisions(&general(5, 2, 6)).map_err(|e| e.to_string())?;
    ensure(records.is_empty(), || format!("{} records for (5, 2)", records.len()))
}

fn render(records: &[CollisionRecord]) -> String {
    records
        .iter()
        .map(|r| format!("{} | {} | {} | {}\n", r.first, r.second, r.k, r.canonical_sums.to_literal()))
        .collect()
}

fn determinism() -> Outcome {
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get()).max(4);
    for spec in [twelve_four(8), general(4, 2, 7), general(5, 2, 6)] {
        let one = Searcher::new(spec.clone()).workers(1).run().map_err(|e| e.to_string())?;
        let many = Searcher::new(spec.clone()).workers(workers).run().map_err(|e| e.to_string())?;
        ensure(render(&one).into_bytes() == render(&many).into_bytes(), || {
            format!("(n = {}, k = {}) differs between 1 and {workers} workers", spec.n, spec.k)
        })?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("counterexample verification", Duration::from_secs(1), counterexample),
        ("Example 1 fixture", Duration::from_secs(10), example_one_fixture),
        ("identity regression", Duration::from_secs(60), identity_regression),
        ("refutation coefficients", Duration::from_secs(60), refutation_coefficients),
        ("closed-form fixtures", Duration::from_secs(60), closed_forms),
        ("oracle equivalence", Duration::from_secs(300), oracle_equivalence),
        ("residual certification", Duration::from_secs(60), residual_certification),
        ("search rediscovery", Duration::from_secs(600), search_rediscovery),
        ("determinism", Duration::from_secs(600), determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let outcome = result.and_then(|()| {
            ensure(took <= budget, || format!("took longer than the {}s budget", budget.as_secs()))
        });
        match outcome {
            Ok(()) => println!("PASS {}. {name} ({:.2}s, budget {}s)", i + 1, took.as_secs_f64(), budget.as_secs()),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name} ({:.2}s): {why}", i + 1, took.as_secs_f64());
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
