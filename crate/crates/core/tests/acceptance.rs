//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use qmdetect::algebra::rational::sign;
use qmdetect::algebra::{is_prime, primes_up_to, CycValue, DirichletCharacter, Rational};
use qmdetect::detector::{sign_changes, Progression};
use qmdetect::eisenstein::{
    finite_prime_check, h_difference, h_parameter_points, l_value, prime_coefficient_polynomial,
    primes_in_progression, EisensteinCombination, EisensteinSpec, HSpec, ParityPolicy, Verdict,
};
use qmdetect::macmahon::verify_prime_identity;
use qmdetect::qseries::{delta_series, QSeries};
use qmdetect::wexpr::{
    certify_prime_detection, coefficient_a_quadruple, decompose_traced, expand_decomposition,
    quadruple_expression, sign_of_composite, CertifyMode, PrimeCountPolicy, Quadruple, WExpression, WVerdict,
};

const MACMAHON_NMAX: u64 = 2000;
const MACMAHON_TIME_LIMIT: Duration = Duration::from_secs(60);
const PRIME_BOUND: u64 = 10_000;
const COMPOSITE_BOUND: u64 = 1000;
const OPERATOR_TRUNCATION: u64 = 1000;
const DELTA_BOUND: u64 = 100_000;
const DELTA_MIN_CHANGES: u64 = 50;
const H_MODULI: [u64; 4] = [1, 3, 4, 5];
const H_MAX_WEIGHT_SUM: u32 = 10;

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_quadruple(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Quadruple {
    Quadruple([0; 4].map(|_| rng.gen_range(lo..=hi)))
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let report = verify_prime_identity(MACMAHON_NMAX).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(
        report.holds() && elapsed < MACMAHON_TIME_LIMIT,
        format!(
            "{} mismatches for 2 <= n <= {MACMAHON_NMAX}, {:.2} s (limit {} s)",
            report.mismatches.len(),
            elapsed.as_secs_f64(),
            MACMAHON_TIME_LIMIT.as_secs()
        ),
    )
}

fn criterion_2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let quads: Vec<Quadruple> = (0..200).map(|_| random_quadruple(&mut rng, 0, 5)).collect();
    let primes = primes_up_to(PRIME_BOUND);
    let nonzero: usize = quads
        .par_iter()
        .map(|&m| primes.iter().filter(|&&p| !coefficient_a_quadruple(m, p).is_zero()).count())
        .sum();
    ensure(
        nonzero == 0,
        format!("{nonzero} nonzero a_m(p) over 200 quadruples x {} primes <= {PRIME_BOUND}", primes.len()),
    )
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let quads: Vec<Quadruple> = (0..100).map(|_| random_quadruple(&mut rng, -4, 4)).collect();
    let composites: Vec<u64> = (4..=COMPOSITE_BOUND).filter(|&n| !is_prime(n)).collect();
    let mismatches: usize = quads
        .par_iter()
        .map(|&m| {
            composites
                .iter()
                .filter(|&&n| sign_of_composite(m, n).unwrap() != sign(&coefficient_a_quadruple(m, n)))
                .count()
        })
        .sum();
    ensure(
        mismatches == 0,
        format!("{mismatches} sign mismatches over 100 quadruples x {} composites <= {COMPOSITE_BOUND}", composites.len()),
    )
}

fn random_combination(rng: &mut ChaCha8Rng) -> WExpression {
    let parts = rng.gen_range(1..=5);
    (0..parts).fold(WExpression::zero(), |acc, _| {
        let m = random_quadruple(rng, 0, 6);
        let c = Rational::new(BigInt::from(rng.gen_range(-12..=12)), BigInt::from(rng.gen_range(1..=8)));
        acc.add(&quadruple_expression(m).unwrap().scale(&c))
    })
}

fn random_generic(rng: &mut ChaCha8Rng) -> WExpression {
    loop {
        let terms = (0..rng.gen_range(1..=5)).map(|_| {
            let a = Rational::new(BigInt::from(rng.gen_range(-9..=9)), BigInt::from(rng.gen_range(1..=4)));
            (a, rng.gen_range(0..=6u32), rng.gen_range(0..=6u32))
        });
        let w = WExpression::from_divisor_expression(terms);
        if !w.zeta_exponents().is_trivial() {
            return w;
        }
    }
}

fn criterion_4_and_5() -> (Check, Check) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let combos: Vec<WExpression> = (0..100).map(|_| random_combination(&mut rng)).collect();
    let generic: Vec<WExpression> = (0..100).map(|_| random_generic(&mut rng)).collect();

    let mut disagreements = 0;
    let mut reexpansion_failures = 0;
    let mut over_bound = 0;
    let mut max_steps = 0;
    for w in &combos {
        let cert = certify_prime_detection(w, CertifyMode::All, PrimeCountPolicy::DegreePlusOne).unwrap();
        if cert.verdict != WVerdict::Detects || !cert.modes_agree() || cert.modes.len() != 3 {
            disagreements += 1;
        }
        match decompose_traced(w) {
            Ok((parts, stats)) => {
                if expand_decomposition(&parts).unwrap() != *w {
                    reexpansion_failures += 1;
                }
                if stats.steps > stats.bound {
                    over_bound += 1;
                }
                max_steps = max_steps.max(stats.steps);
            }
            Err(_) => reexpansion_failures += 1,
        }
    }
    let mut generic_failures = 0;
    for w in &generic {
        let exp = certify_prime_detection(w, CertifyMode::Exponents, PrimeCountPolicy::DegreePlusOne).unwrap();
        let primes = certify_prime_detection(w, CertifyMode::Primes, PrimeCountPolicy::DegreePlusOne).unwrap();
        let witnessed = primes.witness.as_ref().is_some_and(|wt| w.coefficient_a(wt.prime) == wt.value && !wt.value.is_zero());
        if exp.verdict != WVerdict::Refuted || primes.verdict != WVerdict::Refuted || !witnessed {
            generic_failures += 1;
        }
    }
    let c4 = ensure(
        disagreements == 0 && generic_failures == 0,
        format!(
            "{disagreements}/100 combinations with disagreeing modes, {generic_failures}/100 generic W without an agreed refutation and witness"
        ),
    );
    let c5 = ensure(
        reexpansion_failures == 0 && over_bound == 0,
        format!("{reexpansion_failures}/100 re-expansion failures, {over_bound} runs over the step bound (max {max_steps} steps)"),
    );
    (c4, c5)
}

struct HData {
    modulus: u64,
    residue: i64,
    primes: Vec<u64>,
    points: Vec<(HSpec, Vec<CycValue>)>,
}

fn h_data() -> Vec<HData> {
    let mut jobs = Vec::new();
    for modulus in H_MODULI {
        for residue in (1..=modulus as i64).filter(|&r| qmdetect::algebra::arith::gcd_i64(r, modulus) == 1) {
            for k in 4..=H_MAX_WEIGHT_SUM {
                jobs.push((modulus, residue, k));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(modulus, residue, k)| {
            let primes: Vec<u64> = primes_up_to(PRIME_BOUND)
                .into_iter()
                .filter(|&p| (p as i64 - residue).rem_euclid(modulus as i64) == 0)
                .collect();
            let points = h_parameter_points(k, modulus, residue, ParityPolicy::Formal)
                .unwrap()
                .into_par_iter()
                .map(|h| {
                    let f = h.combination();
                    let values = primes.iter().map(|&p| f.coefficient(p)).collect();
                    (h, values)
                })
                .collect();
            HData { modulus, residue, primes, points }
        })
        .collect()
}

fn criterion_6(data: &[HData]) -> Check {
    let mut formula_failures = 0usize;
    let mut nonzero_differences = 0usize;
    let mut pairs = 0usize;
    let mut singles = 0usize;
    for block in data {
        for (h, values) in &block.points {
            singles += 1;
            let k = h.weight_sum();
            for (&p, v) in block.primes.iter().zip(values) {
                let expected = BigInt::from(2) * (num_traits::pow(BigInt::from(p), (k - 2) as usize) - 1);
                if *v != CycValue::from_rational(Rational::from_integer(expected)) {
                    formula_failures += 1;
                }
            }
        }
        let n = block.points.len();
        for i in 0..n {
            for j in i + 1..n {
                pairs += 1;
                let (a, b) = (&block.points[i].1, &block.points[j].1);
                nonzero_differences += a.iter().zip(b).filter(|(x, y)| x != y).count();
            }
        }
    }
    ensure(
        formula_failures == 0 && nonzero_differences == 0,
        format!(
            "{nonzero_differences} nonzero prime coefficients over {pairs} H-differences, {formula_failures} c_H(p) != 2(p^(K-2) - 1) over {singles} H's (M in {H_MODULI:?}, K <= {H_MAX_WEIGHT_SUM}, p <= {PRIME_BOUND})"
        ),
    )
}

fn criterion_7(data: &[HData]) -> Check {
    let mut jobs: Vec<(&HData, EisensteinCombination, bool)> = Vec::new();
    for block in data {
        let n = block.points.len();
        for i in 0..n {
            let (h, values) = &block.points[i];
            jobs.push((block, h.combination(), values.iter().all(CycValue::is_zero)));
            for j in i + 1..n {
                let (g, other) = &block.points[j];
                let vanishes = values.iter().zip(other).all(|(x, y)| x == y);
                jobs.push((block, h_difference(h, g), vanishes));
            }
        }
    }
    let total = jobs.len();
    let (disagreements, detected) = jobs
        .into_par_iter()
        .map(|(block, f, scan_vanishes)| {
            let poly = prime_coefficient_polynomial(&f, block.residue, block.modulus).unwrap();
            let primes = primes_in_progression(block.residue, block.modulus, poly.degree_bound() + 1);
            let detects = finite_prime_check(&poly, &primes).unwrap().verdict == Verdict::Detects;
            ((detects != scan_vanishes) as usize, detects as usize)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    ensure(
        disagreements == 0,
        format!("{disagreements}/{total} finite checks disagree with the scan to {PRIME_BOUND} ({detected} detect, {} refuted)", total - detected),
    )
}

fn criterion_8() -> Check {
    let t = OPERATOR_TRUNCATION;
    let forms = [delta_series(t), EisensteinSpec::level_one(4).unwrap().qexp(t)];
    let same = |a: &QSeries, b: &QSeries| a.coeffs() == b.coeffs();
    let mut failures = Vec::new();
    let chi = DirichletCharacter::kronecker(-3).unwrap();
    for f in &forms {
        for m in 1..=12u64 {
            for r in 0..m as i64 {
                let s = f.sieve(m, r);
                if !same(&s.sieve(m, r), &s) {
                    failures.push(format!("idempotence {r}/{m}"));
                }
                for r2 in (0..m as i64).filter(|&x| x != r) {
                    if !s.sieve(m, r2).is_zero() {
                        failures.push(format!("annihilation {r}/{m} {r2}/{m}"));
                    }
                }
            }
        }
        for (m1, r1, m2, r2) in [(3, 1, 4, 3), (6, 5, 4, 1), (5, 2, 10, 7), (12, 7, 8, 3), (9, 4, 6, 1)] {
            let ab = f.sieve(m1, r1).sieve(m2, r2);
            if !same(&ab, &f.sieve(m2, r2).sieve(m1, r1)) {
                failures.push(format!("commutation {r1}/{m1} {r2}/{m2}"));
            }
            let disjoint = Progression::new(r1, m1).unwrap().intersection(&Progression::new(r2, m2).unwrap()).is_none();
            if disjoint != ab.is_zero() {
                failures.push(format!("disjoint progressions {r1}/{m1} {r2}/{m2}"));
            }
        }
        for a in 1..=6 {
            for b in 1..=6 {
                if !same(&f.v_operator(a).v_operator(b), &f.v_operator(a * b)) {
                    failures.push(format!("V_{a} V_{b}"));
                }
            }
        }
        let g = f.sub(&f.twist(&chi));
        for n in 1..=t {
            let c = f.coeff(n).unwrap();
            let expected = match n % 3 {
                1 => CycValue::zero(),
                2 => c + c,
                _ => c.clone(),
            };
            if *g.coeff(n).unwrap() != expected {
                failures.push(format!("f - f x chi_-3 at n = {n}"));
            }
        }
    }
    ensure(
        failures.is_empty(),
        format!("{} operator identity failures at truncation {t} on Delta and E_4 {}", failures.len(), failures.iter().take(3).cloned().collect::<Vec<_>>().join("; ")),
    )
}

fn criterion_9() -> Check {
    let one = DirichletCharacter::principal(1);
    let l1 = l_value(2, &one);
    let l3 = l_value(4, &one);
    let ok_l = l1 == CycValue::from_rational(Rational::new((-1).into(), 12.into()))
        && l3 == CycValue::from_rational(Rational::new(1.into(), 120.into()));
    let e2 = EisensteinSpec::e2().qexp(OPERATOR_TRUNCATION);
    let mut bad = 0;
    if *e2.coeff(0).unwrap() != CycValue::one() {
        bad += 1;
    }
    for n in 1..=OPERATOR_TRUNCATION {
        let sigma: i64 = (1..=n).filter(|d| n % d == 0).map(|d| d as i64).sum();
        if *e2.coeff(n).unwrap() != CycValue::from_integer(-24 * sigma) {
            bad += 1;
        }
    }
    ensure(
        ok_l && bad == 0,
        format!("L(-1) = {l1}, L(-3) = {l3}, {bad} E_2 coefficient mismatches for n <= {OPERATOR_TRUNCATION}"),
    )
}

fn criterion_10() -> Check {
    let delta = delta_series(DELTA_BOUND);
    let d = sign_changes(&delta, Progression::all(), DELTA_BOUND).map_err(|e| e.to_string())?;
    let e2 = sign_changes(&EisensteinSpec::e2(), Progression::all(), DELTA_BOUND).map_err(|e| e.to_string())?;
    let all_negative = primes_up_to(DELTA_BOUND)
        .iter()
        .all(|&p| EisensteinSpec::e2().coefficient(p).to_rational().is_some_and(|r| r.is_negative()));
    ensure(
        d.count >= DELTA_MIN_CHANGES && e2.count == 0 && all_negative,
        format!(
            "Delta: {} sign changes over {} primes <= {DELTA_BOUND} (need >= {DELTA_MIN_CHANGES}); E_2: {} changes, all negative: {all_negative}",
            d.count, d.primes_examined, e2.count
        ),
    )
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn main() {
    let mut failed = 0;
    let mut report = |n: u32, (check, elapsed): (Check, Duration)| {
        let secs = elapsed.as_secs_f64();
        match &check {
            Ok(detail) => println!("criterion {n:>2} PASS  {detail} [{secs:.1} s]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {detail} [{secs:.1} s]")
            }
        }
    };
    report(1, timed(criterion_1));
    report(2, timed(criterion_2));
    report(3, timed(criterion_3));
    let ((c4, c5), elapsed) = timed(criterion_4_and_5);
    report(4, (c4, elapsed));
    report(5, (c5, Duration::ZERO));
    let (data, prep) = timed(h_data);
    let (c6, elapsed) = timed(|| criterion_6(&data));
    report(6, (c6, prep + elapsed));
    report(7, timed(|| criterion_7(&data)));
    report(8, timed(criterion_8));
    report(9, timed(criterion_9));
    report(10, timed(criterion_10));
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
