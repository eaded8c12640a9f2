//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line reaches the terminal:
//! `cargo test -p ipv-cli --test acceptance`. Exits nonzero if any
//! criterion fails.

use std::time::{Duration, Instant};

use ipv_core::binom::{case_check_with, decompose_with, factorial_valuation, valuation, valuation_kummer};
use ipv_core::bounds::{exp_factor_rational, lemma31_check, lemma32_check};
use ipv_core::exact::{certify, exp_enclosure, log_enclosure, sqrt_enclosure, BigRational, Expr, Relation, Status};
use ipv_core::report::{CheckReport, Verdict};
use ipv_core::sieve::{build_table, PrimeTable};
use ipv_core::theorems::{
    count_lower_bound_with, iteration_slack, iteration_threshold, sweep_theorem41, sweep_theorem42, sweep_theorem43,
    verify_tail_certificate,
};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const PRECISION: u32 = 512;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ipv").chain(args.iter().copied());
    let code = ipv_cli::run_with_env(argv, None, &mut out, &mut err);
    (code, String::from_utf8(out).expect("utf-8 report"))
}

fn all_items_pass(report: &CheckReport) -> Result<(), String> {
    match report.failures().next() {
        None if report.status == Verdict::Pass => Ok(()),
        None => Err(format!("{} is {}", report.check_id, report.status)),
        Some(item) => Err(format!("{}: {} is {}", report.check_id, item.instance, item.verdict)),
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (code, json) = run_cli(&["verify", "theorem", "3.3", "--from", "3", "--to", "6817"]);
    let elapsed = start.elapsed();
    ensure(code == 0, || format!("exit code {code}"))?;
    let report: CheckReport = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    all_items_pass(&report)?;
    let expected: Vec<String> = (3..=6817).map(|n| format!("n={n}")).collect();
    let got: Vec<&str> = report.items.iter().map(|i| i.instance.as_str()).collect();
    ensure(got == expected, || "items do not cover n = 3..6817 in order".into())?;
    ensure(elapsed <= Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("{} instances, {:.2} s", report.items.len(), elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let r = exp_factor_rational(6818);
    let expected = BigRational::parse("1718141/133877484384").map_err(|e| e.to_string())?;
    ensure(r == expected, || format!("got {r}"))?;
    let direct = certify(&Expr::constant(r.clone()), Relation::Lt, &Expr::ratio(14, 1_000_000), PRECISION).map_err(|e| e.to_string())?;
    ensure(direct.is_proved(), || format!("r < 14/10^6 is {}", direct.status))?;
    let check = lemma31_check(1, 6818, PRECISION).map_err(|e| e.to_string())?;
    ensure(check.status() == Status::Proved, || format!("lemma-3.1.1 is {}", check.status()))?;
    Ok(format!("(252n+5)/(2880n^2+48n) = {r} exactly; < 0.000014 proved"))
}

fn criterion_3() -> Outcome {
    let check = lemma32_check(6818, PRECISION).map_err(|e| e.to_string())?;
    let cert = &check.certificate;
    ensure(cert.is_proved(), || format!("closing inequality is {}", cert.status))?;
    let lo = BigRational::parse("0.00005").map_err(|e| e.to_string())?;
    let hi = BigRational::parse("0.00015").map_err(|e| e.to_string())?;
    ensure(*cert.margin.lo() > lo && *cert.margin.hi() < hi, || {
        format!(
            "margin [{}, {}] escapes (5e-5, 1.5e-4)",
            cert.margin.lo().to_decimal(8),
            cert.margin.hi().to_decimal(8)
        )
    })?;
    ensure(
        check.notes.iter().any(|n| n.contains("discrepancy") && n.contains("0.0742")),
        || "no discrepancy note for 0.0742".into(),
    )?;
    Ok(format!(
        "margin in [{}, {}]; discrepancy note present",
        cert.margin.lo().to_decimal(10),
        cert.margin.hi().to_decimal(10)
    ))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let report = verify_tail_certificate(6818, PRECISION).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    all_items_pass(&report)?;
    for needle in ["binomial", "A bound", "B bound", "T1 chain", "closing inequality"] {
        ensure(report.items.iter().any(|i| i.instance.contains(needle)), || {
            format!("no link mentioning {needle:?}")
        })?;
    }
    ensure(elapsed <= Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} links proved at <= {PRECISION} bits, {:.2} s",
        report.items.len(),
        elapsed.as_secs_f64()
    ))
}

/// C(5n, 4n) = ∏_{i=1..n} (4n+i)/i, each partial product an integer.
fn binomial_5n_4n(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * (4 * n + i) / i)
}

fn criterion_5(table: &PrimeTable) -> Outcome {
    for n in 1..=300 {
        let d = decompose_with(table, n).map_err(|e| e.to_string())?;
        ensure(d.product() == binomial_5n_4n(n), || format!("product mismatch at n = {n}"))?;
        ensure(d.t2.max_exponent() <= 1, || {
            format!("T2 exponent {} at n = {n}", d.t2.max_exponent())
        })?;
    }
    Ok("300 exact identities, T2 squarefree".into())
}

fn criterion_6() -> Outcome {
    const TOP: u64 = 5 * 2000;
    let primes: Vec<u64> = (2..=100u64).filter(|&p| (2..p).all(|d| p % d != 0)).collect();
    let mut comparisons = 0u64;
    for &p in &primes {
        // counts[m] = exponent of p in m!, by dividing out every factor 1..=m.
        let mut counts = vec![0u64; TOP as usize + 1];
        for m in 1..=TOP {
            let (mut k, mut e) = (m, 0);
            while k % p == 0 {
                k /= p;
                e += 1;
            }
            counts[m as usize] = counts[m as usize - 1] + e;
        }
        for m in 0..=TOP {
            ensure(factorial_valuation(p, m) == counts[m as usize], || {
                format!("factorial valuation p = {p}, m = {m}")
            })?;
        }
        for n in 1..=2000u64 {
            let brute = counts[5 * n as usize] - counts[4 * n as usize] - counts[n as usize];
            let legendre = valuation(p, 5 * n, 4 * n).map_err(|e| e.to_string())? as u64;
            let kummer = valuation_kummer(p, 5 * n, 4 * n).map_err(|e| e.to_string())? as u64;
            ensure(legendre == brute && kummer == brute, || {
                format!("p = {p}, n = {n}: legendre {legendre}, kummer {kummer}, brute {brute}")
            })?;
            comparisons += 1;
        }
    }
    Ok(format!("{} primes x 2000 n = {comparisons} agreements", primes.len()))
}

fn criterion_7(table: &PrimeTable) -> Outcome {
    let mut checked = 0;
    for n in (3..=2000).chain([6818]) {
        let report = case_check_with(table, n).map_err(|e| e.to_string())?;
        all_items_pass(&report).map_err(|e| format!("n = {n}: {e}"))?;
        checked += 1;
    }
    Ok(format!("{checked} values of n"))
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    for report in [
        sweep_theorem41(3, 100_000),
        sweep_theorem42(3, 100_000),
        sweep_theorem43(6, 100_000),
    ] {
        let report = report.map_err(|e| e.to_string())?;
        all_items_pass(&report)?;
        parts.push(format!("{} {} items", report.check_id, report.items.len()));
    }
    let threshold = iteration_threshold(7).map_err(|e| e.to_string())?;
    let expected = BigRational::parse("926115/3795").map_err(|e| e.to_string())?;
    ensure(threshold == expected, || format!("threshold constant {threshold}"))?;
    ensure(iteration_slack(7).is_positive() && iteration_slack(8).is_negative(), || {
        "5*4^m - 5^m sign change not between 7 and 8".into()
    })?;
    Ok(format!("{}; threshold 926115/3795; sign change 7 -> 8", parts.join(", ")))
}

fn criterion_9() -> Outcome {
    let table = build_table(5 * 400_000).map_err(|e| e.to_string())?;
    let mut values = Vec::new();
    for n in [6818u64, 10_000, 100_000, 400_000] {
        let bound = count_lower_bound_with(&table, n, PRECISION).map_err(|e| e.to_string())?;
        let true_count = table.count_in_range(4 * n + 1, 5 * n).map_err(|e| e.to_string())?;
        ensure(true_count == bound.true_count, || format!("true count disagrees at n = {n}"))?;
        ensure(*bound.value.hi() <= BigRational::from_integer(true_count), || {
            format!("bound {} exceeds {true_count} at n = {n}", bound.value.hi().to_decimal(4))
        })?;
        values.push((n, bound.value.clone(), true_count));
    }
    let (_, at_1e5, _) = &values[2];
    let (_, at_4e5, _) = &values[3];
    ensure(at_4e5.lo() > at_1e5.hi(), || "bound at 4*10^5 does not exceed bound at 10^5".into())?;
    Ok(values
        .iter()
        .map(|(n, v, t)| format!("n={n}: {} <= {t}", v.hi().to_decimal(6)))
        .collect::<Vec<_>>()
        .join("; "))
}

/// Independent fixed-point oracle with `FRAC` fractional bits: Taylor
/// series for exp, Newton iteration on that exp for log, integer Newton
/// square root for sqrt.
mod oracle {
    use num_bigint::{BigInt, BigUint};
    use num_traits::{One, Signed, ToPrimitive, Zero};

    pub const FRAC: u64 = 320;

    fn one() -> BigInt {
        BigInt::one() << FRAC
    }

    fn mul(a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> FRAC
    }

    fn div(a: &BigInt, b: &BigInt) -> BigInt {
        (a << FRAC) / b
    }

    /// exp of a fixed-point value.
    pub fn exp(x: &BigInt) -> BigInt {
        if x.is_negative() {
            return div(&one(), &exp(&-x));
        }
        // Halve until x < 2^-8, sum the series, square back.
        let mut k = 0;
        let mut r = x.clone();
        while r > (one() >> 8u32) {
            r >>= 1u32;
            k += 1;
        }
        let mut term = one();
        let mut sum = one();
        let mut i = 1u32;
        while !term.is_zero() {
            term = mul(&term, &r) / i;
            sum += &term;
            i += 1;
        }
        for _ in 0..k {
            sum = mul(&sum, &sum);
        }
        sum
    }

    /// log of num/den > 0 by y ← y + 2(x − e^y)/(x + e^y).
    pub fn log(num: &BigInt, den: &BigInt) -> BigInt {
        let x = (num << FRAC) / den;
        let guess = num.to_f64().unwrap().ln() - den.to_f64().unwrap().ln();
        let mut y = BigInt::from((guess * (1u64 << 52) as f64) as i64) << (FRAC - 52);
        for _ in 0..8 {
            let e = exp(&y);
            y += div(&((&x - &e) * 2), &(&x + &e));
        }
        y
    }

    /// sqrt of num/den ≥ 0.
    pub fn sqrt(num: &BigInt, den: &BigInt) -> BigInt {
        let scaled = ((num << (2 * FRAC)) / den).to_biguint().unwrap();
        BigInt::from(newton_isqrt(&scaled))
    }

    fn newton_isqrt(v: &BigUint) -> BigUint {
        if v.is_zero() {
            return BigUint::zero();
        }
        let mut x = BigUint::one() << (v.bits() / 2 + 1);
        loop {
            let next = (&x + v / &x) >> 1u32;
            if next >= x {
                return x;
            }
            x = next;
        }
    }
}

fn criterion_10() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x4e5);
    let mut wrong = 0;
    let mut undecided = 0;
    let relations = [Relation::Lt, Relation::Le, Relation::Gt, Relation::Ge];
    for i in 0..10_000 {
        let rel = relations[rng.gen_range(0..4)];
        let (a, b) = (
            rng.gen_range(-1_000_000_000_000i64..1_000_000_000_000),
            rng.gen_range(1..1_000_000i64),
        );
        let (c, d) = if i % 20 == 0 {
            (2 * a, 2 * b)
        } else {
            (
                rng.gen_range(-1_000_000_000_000i64..1_000_000_000_000),
                rng.gen_range(1..1_000_000i64),
            )
        };
        let ord = (a as i128 * d as i128).cmp(&(c as i128 * b as i128));
        let (lhs, rhs) = match i % 4 {
            0 | 1 => (
                Expr::constant(BigRational::new(a.into(), b.into())),
                Expr::constant(BigRational::new(c.into(), d.into())),
            ),
            // Monotone transforms keep the order of the rational arguments.
            2 => {
                let (a, c) = (a.abs() + 1, c.abs() + 1);
                let ord = (a as i128 * d as i128).cmp(&(c as i128 * b as i128));
                if ord.is_eq() {
                    continue;
                }
                let l = Expr::constant(BigRational::new(a.into(), b.into())).log();
                let r = Expr::constant(BigRational::new(c.into(), d.into())).sqrt().log() * Expr::int(2);
                check_verdict(&l, rel, &r, ord, &mut wrong, &mut undecided)?;
                continue;
            }
            _ => {
                if ord.is_eq() {
                    continue;
                }
                let scale = 1_000_000_000i64;
                let l = Expr::constant(BigRational::new(a.into(), (b * scale).into())).exp();
                let r = Expr::constant(BigRational::new(c.into(), (d * scale).into())).exp();
                check_verdict(&l, rel, &r, ord, &mut wrong, &mut undecided)?;
                continue;
            }
        };
        check_verdict(&lhs, rel, &rhs, ord, &mut wrong, &mut undecided)?;
    }

    let bits = 200;
    let eps = BigRational::from_dyadic(BigInt::one(), -((oracle::FRAC - 64) as i64));
    let tight = BigRational::from_dyadic(BigInt::one(), -180);
    let mut contained = 0;
    for i in 0..1_000 {
        let num = BigInt::from(rng.gen_range(1..1_000_000_000i64));
        let den = BigInt::from(rng.gen_range(1..1_000_000i64));
        let arg = BigRational::new(num.clone(), den.clone());
        let (enclosure, truth, name) = match i % 3 {
            0 => (
                log_enclosure(&arg, bits).map_err(|e| e.to_string())?,
                oracle::log(&num, &den),
                "log",
            ),
            1 => {
                // exp on [-40, 40].
                let x = BigRational::new(BigInt::from(rng.gen_range(-40_000_000i64..40_000_000)), BigInt::from(1_000_000));
                let fixed = (x.numer() << oracle::FRAC) / x.denom();
                (exp_enclosure(&x, bits), oracle::exp(&fixed), "exp")
            }
            _ => (
                sqrt_enclosure(&arg, bits).map_err(|e| e.to_string())?,
                oracle::sqrt(&num, &den),
                "sqrt",
            ),
        };
        let truth = BigRational::from_dyadic(truth, -(oracle::FRAC as i64));
        let scale = truth.abs() + BigRational::one();
        let inside = *enclosure.lo() <= &truth + &eps * &scale && &truth - &eps * &scale <= *enclosure.hi();
        ensure(inside, || {
            format!(
                "{name} enclosure [{}, {}] misses oracle {}",
                enclosure.lo().to_decimal(30),
                enclosure.hi().to_decimal(30),
                truth.to_decimal(30)
            )
        })?;
        ensure(enclosure.width() <= &tight * &scale, || {
            format!("{name} enclosure wider than 2^-180 relative")
        })?;
        contained += 1;
    }
    ensure(wrong == 0, || format!("{wrong} wrong verdicts"))?;
    Ok(format!(
        "0 wrong of 10^4 comparisons ({undecided} undecided); {contained}/1000 enclosures contain the 320-bit oracle"
    ))
}

fn check_verdict(
    lhs: &Expr,
    rel: Relation,
    rhs: &Expr,
    ord: std::cmp::Ordering,
    wrong: &mut u32,
    undecided: &mut u32,
) -> Result<(), String> {
    use std::cmp::Ordering::*;
    let truth = match rel {
        Relation::Lt => ord == Less,
        Relation::Le => ord != Greater,
        Relation::Gt => ord == Greater,
        Relation::Ge => ord != Less,
    };
    let cert = certify(lhs, rel, rhs, PRECISION).map_err(|e| e.to_string())?;
    match cert.status {
        Status::Proved if !truth => *wrong += 1,
        Status::Refuted if truth => *wrong += 1,
        Status::Undecided => *undecided += 1,
        _ => {}
    }
    Ok(())
}

fn main() {
    let table = build_table(5 * 6818).expect("prime table");
    let criteria: Vec<Criterion> = vec![
        ("base-case sweep n = 3..6817 via the CLI", Box::new(criterion_1)),
        ("exponential-factor rational at n = 6818", Box::new(criterion_2)),
        ("closing inequality at n = 6818", Box::new(criterion_3)),
        ("tail certificate at n = 6818", Box::new(criterion_4)),
        ("decomposition identity n <= 300", Box::new(|| criterion_5(&table))),
        ("valuation oracles p <= 100, n <= 2000", Box::new(criterion_6)),
        ("case analysis n <= 2000 and n = 6818", Box::new(|| criterion_7(&table))),
        ("consequence sweeps to 10^5", Box::new(criterion_8)),
        ("count bound soundness", Box::new(criterion_9)),
        ("certifier soundness", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {title}: {detail} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{:>2}] {title}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
