//! Maps parsed commands to library checks, producing reports.

use std::time::Instant;

use ipv_core::binom::{binomial_with, bracket, bracket_a, bracket_b, decompose_with};
use ipv_core::bounds::{lemma23_grid_check, lemma31_check, lemma32_check, uniform_grid, StirlingBounds, GRID_DENSITY, TAIL_START};
use ipv_core::exact::{certify, BigRational, Expr, Relation};
use ipv_core::report::{CheckReport, Item, Verdict};
use ipv_core::sieve::build_table;
use ipv_core::theorems::{
    count_lower_bound, sweep_theorem41, sweep_theorem42, sweep_theorem43, threshold_for_count, verify_base_cases, verify_tail_certificate,
};
use ipv_core::{Error, Result};

use crate::args::{Command, Target};

/// Upper end of the default sweeps for the consequences.
pub const DEFAULT_SWEEP_TO: u64 = 100_000;
/// Upper end of the spot sweeps inside `verify all`.
pub const SPOT_SWEEP_TO: u64 = 10_000;
/// Last n of the finite base range.
pub const BASE_TO: u64 = TAIL_START - 1;

pub fn execute(command: &Command, precision: u32) -> Result<Vec<CheckReport>> {
    match command {
        Command::Verify { target } => verify(target, precision),
        Command::Decompose { n } => Ok(vec![decompose_report(*n)?]),
        Command::Bracket { s, r } => Ok(vec![bracket_report(&BigRational::parse(s)?, &BigRational::parse(r)?)?]),
        Command::CountBound { n } => Ok(vec![count_lower_bound(*n, precision)?.to_report(precision)]),
        Command::Scan { k, from, to } => Ok(vec![ipv_core::theorems::scan_general(*k, *from, *to)?]),
    }
}

fn verify(target: &Target, precision: u32) -> Result<Vec<CheckReport>> {
    match target {
        Target::All => verify_all(precision),
        Target::Lemma { id, part, n, c } => lemma(id, *part, *n, c.as_deref(), precision),
        Target::Theorem { id, n, from, to, m } => theorem(id, *n, from.zip(*to), *m, precision),
    }
}

/// Base cases, the tail certificate at the threshold, the auxiliary
/// inequalities, and spot sweeps of the consequences.
pub fn verify_all(precision: u32) -> Result<Vec<CheckReport>> {
    let mut out = vec![verify_base_cases(3, BASE_TO)?, verify_tail_certificate(TAIL_START, precision)?];
    for part in 1..=4 {
        out.push(lemma31_check(part, TAIL_START, precision)?.to_report(precision));
    }
    out.push(lemma32_check(TAIL_START, precision)?.to_report(precision));
    out.push(sweep_theorem41(3, SPOT_SWEEP_TO)?);
    out.push(sweep_theorem42(3, SPOT_SWEEP_TO)?);
    out.push(sweep_theorem43(6, SPOT_SWEEP_TO)?);
    out.push(count_lower_bound(DEFAULT_SWEEP_TO, precision)?.to_report(precision));
    Ok(out)
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn lemma(id: &str, part: Option<u32>, n: Option<u64>, c: Option<&str>, precision: u32) -> Result<Vec<CheckReport>> {
    match id {
        "2.1" => Ok(vec![stirling_report(n, precision)?]),
        "2.2" => Ok(vec![bracket_bound_report(n)?]),
        "2.3" => {
            let parts = part.map_or(vec![1, 2], |p| vec![p]);
            let c = c.map(BigRational::parse).transpose()?;
            parts.into_iter().map(|p| monotonicity_report(p, c.clone(), precision)).collect()
        }
        "3.1" => {
            let parts = part.map_or(vec![1, 2, 3, 4], |p| vec![p]);
            parts
                .into_iter()
                .map(|p| Ok(lemma31_check(p, n.unwrap_or(TAIL_START), precision)?.to_report(precision)))
                .collect()
        }
        "3.2" => Ok(vec![lemma32_check(n.unwrap_or(TAIL_START), precision)?.to_report(precision)]),
        other => Err(usage(format!("unknown lemma {other:?}; expected 2.1, 2.2, 2.3, 3.1 or 3.2"))),
    }
}

fn theorem(id: &str, n: Option<u64>, range: Option<(u64, u64)>, m: Option<u64>, precision: u32) -> Result<Vec<CheckReport>> {
    let span = |lo: u64| range.or(n.map(|n| (n, n))).unwrap_or((lo, DEFAULT_SWEEP_TO));
    match id {
        "3.3" => match (n, range) {
            (Some(n), _) if n >= TAIL_START => Ok(vec![verify_tail_certificate(n, precision)?]),
            (Some(n), _) => Ok(vec![verify_base_cases(n, n)?]),
            (None, Some((a, b))) => Ok(vec![verify_base_cases(a, b)?]),
            (None, None) => Ok(vec![
                verify_base_cases(3, BASE_TO)?,
                verify_tail_certificate(TAIL_START, precision)?,
            ]),
        },
        "4.1" => {
            let (a, b) = span(3);
            Ok(vec![sweep_theorem41(a, b)?])
        }
        "4.2" => {
            let (a, b) = span(3);
            Ok(vec![sweep_theorem42(a, b)?])
        }
        "4.3" => {
            let (a, b) = span(6);
            Ok(vec![sweep_theorem43(a, b)?])
        }
        "4.4" => {
            if range.is_some() {
                return Err(usage("theorem 4.4 takes --n, not a range"));
            }
            Ok(vec![
                count_lower_bound(n.unwrap_or(DEFAULT_SWEEP_TO), precision)?.to_report(precision)
            ])
        }
        "4.5" => Ok(vec![threshold_report(m.unwrap_or(100), precision)?]),
        other => Err(usage(format!("unknown theorem {other:?}; expected 3.3, 4.1, 4.2, 4.3, 4.4 or 4.5"))),
    }
}

/// l(x) ≤ x! ≤ u(x) at one x, or for x = 1..=30.
fn stirling_report(x: Option<u64>, precision: u32) -> Result<CheckReport> {
    let start = Instant::now();
    let xs: Vec<u64> = x.map_or((1..=30).collect(), |x| vec![x]);
    let mut report = CheckReport::new("lemma-2.1").param("precision", precision);
    for x in xs {
        let b = StirlingBounds::new(&BigRational::from_integer(x))?;
        let fact = (1..=x).fold(BigRational::one(), |acc, k| acc * BigRational::from(k));
        let f = Expr::constant(fact);
        report.push(Item::from_certificate(
            format!("l({x}) <= {x}!"),
            &certify(&b.lower, Relation::Le, &f, precision)?,
        ));
        report.push(Item::from_certificate(
            format!("{x}! <= u({x})"),
            &certify(&f, Relation::Le, &b.upper, precision)?,
        ));
    }
    Ok(report.timed(start))
}

/// 1 ≤ δ ≤ s for A and B at the given n (default 3, 100, 6818).
fn bracket_bound_report(n: Option<u64>) -> Result<CheckReport> {
    let start = Instant::now();
    let ns = n.map_or(vec![3, 100, TAIL_START], |n| vec![n]);
    let mut report = CheckReport::new("lemma-2.2");
    for n in ns {
        for (name, b) in [("A", bracket_a(n)?), ("B", bracket_b(n)?)] {
            let delta = BigRational::from(b.delta.clone());
            let ok = delta >= BigRational::one() && delta <= b.s;
            report.push(
                Item::new(format!("n={n} {name}: 1 <= delta <= s"), Verdict::from_bool(ok))
                    .with_witness(format!("delta = {}, s = {}", b.delta, b.s)),
            );
        }
    }
    Ok(report.timed(start))
}

fn monotonicity_report(part: u32, c: Option<BigRational>, precision: u32) -> Result<CheckReport> {
    let half = BigRational::ratio(1, 2);
    let (c, grid) = match part {
        1 => {
            let c = c.unwrap_or_else(BigRational::one);
            (c, uniform_grid(&half, &BigRational::from_integer(4), GRID_DENSITY))
        }
        2 => {
            let c = c.unwrap_or_else(|| BigRational::from_integer(4));
            let top = &c - &half;
            (c, uniform_grid(&half, &top, GRID_DENSITY))
        }
        _ => return Err(usage(format!("lemma 2.3 has parts 1 and 2, got {part}"))),
    };
    lemma23_grid_check(part, &c, &grid, precision)
}

fn threshold_report(m: u64, precision: u32) -> Result<CheckReport> {
    let start = Instant::now();
    let l = threshold_for_count(m, precision)?;
    let table = build_table(5 * l)?;
    let true_count = table.count_in_range(4 * l + 1, 5 * l - 1)?;
    let mut report = CheckReport::new("theorem-4.5").param("m", m).param("precision", precision);
    report.push(
        Item::new(format!("threshold for {m} primes"), Verdict::Pass)
            .with_witness(l.to_string())
            .with_note("smallest n where the simplified bound is certified >= m"),
    );
    report.push(
        Item::new(format!("true count at n={l} is at least {m}"), Verdict::from_bool(true_count >= m)).with_witness(true_count.to_string()),
    );
    Ok(report.timed(start))
}

/// The T1/T2/T3 split with the exact product identity.
pub fn decompose_report(n: u64) -> Result<CheckReport> {
    if n < 1 {
        return Err(usage("decompose needs n >= 1"));
    }
    let start = Instant::now();
    let table = build_table(5 * n)?;
    let d = decompose_with(&table, n)?;
    let mut report = CheckReport::new("decompose").param("n", n);
    let powers = |m: &ipv_core::binom::ValuationMap| {
        m.entries
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect::<Vec<_>>()
            .join(" ")
    };
    report.push(
        Item::new("T1", Verdict::Pass)
            .with_witness(powers(&d.t1))
            .with_note(format!("{} primes with p^2 <= 5n", d.t1.entries.len())),
    );
    report.push(
        Item::new("T2", Verdict::from_bool(d.t2.max_exponent() <= 1))
            .with_witness(powers(&d.t2))
            .with_note(format!("{} primes, exponents at most 1", d.t2.entries.len())),
    );
    report.push(
        Item::new("T3", Verdict::from_bool(!d.t3.is_empty()))
            .with_witness(d.t3.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
            .with_note(format!("{} primes in [4n+1, 5n]", d.t3.len())),
    );
    let exact = binomial_with(&table, 5 * n, 4 * n)?;
    report.push(Item::new("T1*T2*T3 = C(5n,4n)", Verdict::from_bool(d.product() == exact)).with_note(format!("{} bits", exact.bits())));
    Ok(report.timed(start))
}

/// The bracket value and its factorisation.
pub fn bracket_report(s: &BigRational, r: &BigRational) -> Result<CheckReport> {
    let start = Instant::now();
    let b = bracket(s, r)?;
    let mut report = CheckReport::new("bracket").param("s", s).param("r", r);
    report.push(Item::new("value", Verdict::Pass).with_witness(b.value.to_string()));
    let delta = BigRational::from(b.delta.clone());
    report.push(
        Item::new("1 <= delta <= s", Verdict::from_bool(delta >= BigRational::one() && delta <= b.s)).with_witness(b.delta.to_string()),
    );
    let expected_delta = if s.fract() >= r.fract() {
        BigRational::one()
    } else {
        BigRational::from((s - r).floor()) + BigRational::one()
    };
    report.push(
        Item::new("delta matches fractional parts", Verdict::from_bool(delta == expected_delta)).with_witness(expected_delta.to_string()),
    );
    let product = delta * BigRational::from(b.floor_binomial.clone());
    report.push(
        Item::new(
            format!("value = delta * C({}, {})", b.s.floor(), b.r.floor()),
            Verdict::from_bool(product == b.value),
        )
        .with_witness(b.floor_binomial.to_string()),
    );
    Ok(report.timed(start))
}
