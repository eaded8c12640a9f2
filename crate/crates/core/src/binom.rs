//! Prime valuations of C(5n, 4n), its split into small, middle and target
//! primes, the bracket operator, and brute-force checks of the interval
//! case analysis for the middle primes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_trial, product_of_powers, product_u64};
use crate::error::{Error, Result};
use crate::exact::{certify, BigRational, Certificate, Expr, Relation};
use crate::report::{CheckReport, Item, Verdict};
use crate::sieve::{build_table, PrimeTable};

/// Largest floor value accepted by [`bracket`]; the value is built from an
/// explicit product of that many integers.
pub const BRACKET_MAX_TERMS: u64 = 10_000_000;

fn check_valuation_args(p: u64, top: u64, bottom: u64) -> Result<()> {
    if !is_prime_trial(p) {
        return Err(Error::Usage(format!("{p} is not prime")));
    }
    if bottom > top {
        return Err(Error::Usage(format!("bottom {bottom} exceeds top {top}")));
    }
    Ok(())
}

/// Exponent of `p` in m! by Legendre's formula.
pub fn factorial_valuation(p: u64, m: u64) -> u64 {
    let mut total = 0;
    let mut q = m;
    while q > 0 {
        q /= p;
        total += q;
    }
    total
}

fn legendre(p: u64, top: u64, bottom: u64) -> u32 {
    (factorial_valuation(p, top) - factorial_valuation(p, bottom) - factorial_valuation(p, top - bottom)) as u32
}

/// Exponent of the prime `p` in C(top, bottom), by Legendre's formula.
pub fn valuation(p: u64, top: u64, bottom: u64) -> Result<u32> {
    check_valuation_args(p, top, bottom)?;
    Ok(legendre(p, top, bottom))
}

/// Exponent of the prime `p` in C(top, bottom), as the number of carries
/// when adding `bottom` and `top − bottom` in base `p`.
pub fn valuation_kummer(p: u64, top: u64, bottom: u64) -> Result<u32> {
    check_valuation_args(p, top, bottom)?;
    let (mut a, mut b) = (bottom, top - bottom);
    let mut carry = 0;
    let mut carries = 0;
    while a > 0 || b > 0 || carry > 0 {
        let digit_sum = a % p + b % p + carry;
        carry = u64::from(digit_sum >= p);
        carries += carry as u32;
        a /= p;
        b /= p;
    }
    Ok(carries)
}

/// Prime → exponent, with zero exponents omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationMap {
    pub n: u64,
    pub entries: BTreeMap<u64, u32>,
}

impl ValuationMap {
    /// ∏ p^β(p).
    pub fn product(&self) -> BigUint {
        product_of_powers(self.entries.iter().map(|(&p, &e)| (p, e)))
    }

    pub fn max_exponent(&self) -> u32 {
        self.entries.values().copied().max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// C(5n, 4n) = T1 · T2 · T3 with T1 over p² ≤ 5n, T2 over the remaining
/// p ≤ 4n, and T3 the primes in [4n + 1, 5n].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub n: u64,
    pub t1: ValuationMap,
    pub t2: ValuationMap,
    pub t3: Vec<u64>,
}

impl Decomposition {
    pub fn t3_product(&self) -> BigUint {
        product_u64(self.t3.iter().copied())
    }

    /// T1 · T2 · T3.
    pub fn product(&self) -> BigUint {
        self.t1.product() * self.t2.product() * self.t3_product()
    }
}

/// Whether p belongs to T1. This is the single place the √(5n) boundary is
/// decided; a prime with p² = 5n (only p = 5, n = 5) lands in T1.
pub fn in_t1(p: u64, n: u64) -> bool {
    (p as u128) * (p as u128) <= 5 * n as u128
}

/// Splits C(5n, 4n) into its T1/T2/T3 factors.
pub fn decompose(n: u64) -> Result<Decomposition> {
    if n < 1 {
        return Err(Error::Usage("decompose needs n >= 1".into()));
    }
    decompose_with(&build_table(5 * n)?, n)
}

/// As [`decompose`], reusing a table that covers 5n.
pub fn decompose_with(table: &PrimeTable, n: u64) -> Result<Decomposition> {
    if n < 1 {
        return Err(Error::Usage("decompose needs n >= 1".into()));
    }
    let top = 5 * n;
    let mut t1 = ValuationMap { n, ..Default::default() };
    let mut t2 = ValuationMap { n, ..Default::default() };
    let mut t3 = Vec::new();
    for p in table.iter_range(2, top)? {
        if p > 4 * n {
            t3.push(p);
            continue;
        }
        let beta = legendre(p, top, 4 * n);
        if beta == 0 {
            continue;
        }
        if in_t1(p, n) {
            t1.entries.insert(p, beta);
        } else {
            t2.entries.insert(p, beta);
        }
    }
    Ok(Decomposition { n, t1, t2, t3 })
}

/// C(top, bottom) from its prime factorisation.
pub fn binomial_with(table: &PrimeTable, top: u64, bottom: u64) -> Result<BigUint> {
    if bottom > top {
        return Ok(BigUint::zero());
    }
    let powers: Vec<(u64, u32)> = table
        .iter_range(2, top)?
        .map(|p| (p, legendre(p, top, bottom)))
        .filter(|&(_, e)| e > 0)
        .collect();
    Ok(product_of_powers(powers))
}

/// C(top, bottom) exactly.
pub fn binomial(top: u64, bottom: u64) -> Result<BigUint> {
    if top < 2 {
        return Ok(if bottom <= top { BigUint::one() } else { BigUint::zero() });
    }
    binomial_with(&build_table(top)?, top, bottom)
}

/// The bracket operator: the product of the integers in (s − r, s] over the
/// product of the integers in (0, r], together with its factorisation
/// value = delta · C(⌊s⌋, ⌊r⌋).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketValue {
    pub s: BigRational,
    pub r: BigRational,
    pub value: BigRational,
    #[serde(with = "decimal")]
    pub delta: BigUint,
    #[serde(with = "decimal")]
    pub floor_binomial: BigUint,
}

/// Big integers as decimal strings.
mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

impl BracketValue {
    /// The value as an integer (it always is one).
    pub fn value_integer(&self) -> BigUint {
        self.value.numer().to_biguint().expect("bracket values are positive integers")
    }
}

impl fmt::Display for BracketValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{} brace {}}} = {} * C({}, {})",
            self.s,
            self.r,
            self.delta,
            self.s.floor(),
            self.r.floor()
        )
    }
}

fn floor_u64(q: &BigRational, what: &str) -> Result<u64> {
    q.floor()
        .to_u64()
        .filter(|&v| v <= BRACKET_MAX_TERMS)
        .ok_or_else(|| Error::OutOfRange(format!("{what} = {q} is too large for the bracket operator")))
}

/// Evaluates the bracket operator for s > r ≥ 1.
pub fn bracket(s: &BigRational, r: &BigRational) -> Result<BracketValue> {
    if !(*r >= BigRational::one() && s > r) {
        return Err(Error::Usage(format!("bracket needs s > r >= 1, got s = {s}, r = {r}")));
    }
    let fs = floor_u64(s, "s")?;
    let fr = floor_u64(r, "r")?;
    let fd = floor_u64(&(s - r), "s - r")?;
    let numerator = product_u64(fd + 1..=fs);
    let denominator = product_u64(1..=fr);
    let (value, rem) = numerator.div_rem(&denominator);
    debug_assert!(rem.is_zero(), "the integer count in (s-r, s] is at least [r]");
    let floor_binomial = binomial(fs, fr)?;
    let (delta, rem) = value.div_rem(&floor_binomial);
    if !rem.is_zero() {
        return Err(Error::Domain(format!(
            "bracket value for s = {s}, r = {r} is not a multiple of C([s], [r])"
        )));
    }
    Ok(BracketValue {
        s: s.clone(),
        r: r.clone(),
        value: BigRational::from_integer(BigInt::from(value)),
        delta,
        floor_binomial,
    })
}

/// A = {5n/2 brace 2n}.
pub fn bracket_a(n: u64) -> Result<BracketValue> {
    bracket(&BigRational::ratio(5 * n as i64, 2), &BigRational::from_integer(2 * n))
}

/// B = {5n/3 brace 4n/3}.
pub fn bracket_b(n: u64) -> Result<BracketValue> {
    bracket(&BigRational::ratio(5 * n as i64, 3), &BigRational::ratio(4 * n as i64, 3))
}

/// What the case analysis claims about the primes of one sub-interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    /// β(p) = 0.
    Vanishes,
    /// p divides A = {5n/2 brace 2n}.
    DividesA,
    /// p divides B = {5n/3 brace 4n/3}.
    DividesB,
}

/// A sub-interval (lo_num·n/lo_den, hi_num·n/hi_den] of the middle range.
#[derive(Clone, Copy, Debug)]
pub struct Case {
    pub lo: (u64, u64),
    pub hi: (u64, u64),
    pub claim: Claim,
}

const fn case(lo: (u64, u64), hi: (u64, u64), claim: Claim) -> Case {
    Case { lo, hi, claim }
}

/// The sub-intervals covering (n/4, 4n], in the order the argument lists
/// them. Primes in (√(5n), n/4] are handled by the primorial bound.
pub const CASES: [Case; 18] = [
    case((5, 2), (4, 1), Claim::Vanishes),
    case((2, 1), (5, 2), Claim::DividesA),
    case((5, 3), (2, 1), Claim::Vanishes),
    case((4, 3), (5, 3), Claim::DividesB),
    case((5, 4), (4, 3), Claim::Vanishes),
    case((1, 1), (5, 4), Claim::DividesA),
    case((5, 6), (1, 1), Claim::Vanishes),
    case((2, 3), (5, 6), Claim::DividesB),
    case((5, 8), (2, 3), Claim::Vanishes),
    case((1, 2), (5, 8), Claim::DividesA),
    case((5, 11), (1, 2), Claim::Vanishes),
    case((4, 9), (5, 11), Claim::DividesB),
    case((5, 12), (4, 9), Claim::Vanishes),
    case((1, 3), (5, 12), Claim::DividesB),
    case((5, 16), (1, 3), Claim::Vanishes),
    case((2, 7), (5, 16), Claim::DividesA),
    case((5, 18), (2, 7), Claim::Vanishes),
    case((1, 4), (5, 18), Claim::DividesA),
];

fn frac_label((a, b): (u64, u64)) -> String {
    match (a, b) {
        (1, 1) => "n".to_string(),
        (a, 1) => format!("{a}n"),
        (1, b) => format!("n/{b}"),
        (a, b) => format!("{a}n/{b}"),
    }
}

impl Case {
    /// lo·n < p ≤ hi·n, compared exactly.
    pub fn contains(&self, p: u64, n: u64) -> bool {
        let p = p as u128;
        let n = n as u128;
        p * self.lo.1 as u128 > self.lo.0 as u128 * n && p * self.hi.1 as u128 <= self.hi.0 as u128 * n
    }

    pub fn label(&self) -> String {
        format!("({}, {}]", frac_label(self.lo), frac_label(self.hi))
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Claim::Vanishes => "beta(p) = 0",
            Claim::DividesA => "p divides A",
            Claim::DividesB => "p divides B",
        })
    }
}

/// Exponent of p in the bracket value with numerator range (a, b] and
/// denominator [r]!, from factorial valuations.
fn bracket_valuation(p: u64, a: u64, b: u64, fr: u64) -> i64 {
    factorial_valuation(p, b) as i64 - factorial_valuation(p, a) as i64 - factorial_valuation(p, fr) as i64
}

/// Checks one prime against the claim of its case. For the divisibility
/// claims, p must divide the numerator product (some multiple of p lies in
/// its range) and the exponent of p in the bracket value itself must be
/// positive.
fn claim_holds(claim: Claim, p: u64, n: u64) -> bool {
    match claim {
        Claim::Vanishes => legendre(p, 5 * n, 4 * n) == 0,
        Claim::DividesA => {
            // Numerator over (n/2, 5n/2], denominator (2n)!.
            let (a, b) = (n / 2, 5 * n / 2);
            b / p > a / p && bracket_valuation(p, a, b, 2 * n) >= 1
        }
        Claim::DividesB => {
            // Numerator over (n/3, 5n/3], denominator [4n/3]!.
            let (a, b) = (n / 3, 5 * n / 3);
            b / p > a / p && bracket_valuation(p, a, b, 4 * n / 3) >= 1
        }
    }
}

/// Brute-force check of the middle-prime case analysis at `n`.
pub fn case_check(n: u64) -> Result<CheckReport> {
    if n < 3 {
        return Err(Error::Usage(format!("case analysis needs n >= 3, got {n}")));
    }
    case_check_with(&build_table(5 * n)?, n)
}

/// As [`case_check`], reusing a table that covers 5n.
pub fn case_check_with(table: &PrimeTable, n: u64) -> Result<CheckReport> {
    if n < 3 {
        return Err(Error::Usage(format!("case analysis needs n >= 3, got {n}")));
    }
    table.iter_range(2, 5 * n)?;
    let start = std::time::Instant::now();
    let mut report = CheckReport::new("theorem-3.3-cases").param("n", n);
    let middle: Vec<u64> = table.iter_range(2, 4 * n)?.filter(|&p| !in_t1(p, n)).collect();

    for c in &CASES {
        let primes: Vec<u64> = middle.iter().copied().filter(|&p| c.contains(p, n)).collect();
        let instance = format!("{} {}", c.label(), c.claim);
        let item = if primes.is_empty() {
            Item::new(instance, Verdict::Pass).with_note("vacuous: no primes in range")
        } else {
            match primes.iter().find(|&&p| !claim_holds(c.claim, p, n)) {
                Some(bad) => Item::new(instance, Verdict::Fail).with_witness(bad.to_string()),
                None => Item::new(instance, Verdict::Pass).with_note(format!("{} primes checked", primes.len())),
            }
        };
        report.push(item);
    }

    // Remaining primes in (√(5n), n/4]: their contribution stays below 2^(n/2).
    let low: Vec<u64> = middle.iter().copied().filter(|&p| 4 * p <= n).collect();
    let residual = product_of_powers(low.iter().map(|&p| (p, legendre(p, 5 * n, 4 * n))));
    let bound = BigUint::one() << n;
    let instance = "(sqrt(5n), n/4] product of p^beta(p) < 4^(n/4)";
    let mut item = Item::new(instance, Verdict::from_bool(&residual * &residual < bound));
    if low.is_empty() {
        item = item.with_note("vacuous: no primes in range");
    } else {
        item = item.with_note(format!("{} primes, product has {} bits", low.len(), residual.bits()));
    }
    report.push(item);

    // Every middle prime falls in exactly one sub-interval.
    let unclassified = middle
        .iter()
        .copied()
        .find(|&p| 4 * p > n && CASES.iter().filter(|c| c.contains(p, n)).count() != 1);
    let mut item = Item::new("every middle prime in exactly one case", Verdict::from_bool(unclassified.is_none()));
    if let Some(p) = unclassified {
        item = item.with_witness(p.to_string());
    }
    report.push(item);

    // The middle exponents never exceed one.
    let worst = middle.iter().copied().map(|p| (p, legendre(p, 5 * n, 4 * n))).find(|&(_, e)| e > 1);
    let mut item = Item::new("middle exponents at most 1", Verdict::from_bool(worst.is_none()));
    if let Some((p, e)) = worst {
        item = item.with_witness(format!("{p}^{e}"));
    }
    report.push(item);

    Ok(report.timed(start))
}

/// Certifies T2 < 2^(n/2)·A·B with the exact T2, A and B.
pub fn t2_bound_check(n: u64, max_precision: u32) -> Result<Certificate> {
    if n < 3 {
        return Err(Error::Usage(format!("the T2 bound needs n >= 3, got {n}")));
    }
    let table = build_table(5 * n)?;
    t2_bound_check_with(&table, n, max_precision)
}

/// As [`t2_bound_check`], reusing a table that covers 5n.
pub fn t2_bound_check_with(table: &PrimeTable, n: u64, max_precision: u32) -> Result<Certificate> {
    let t2 = decompose_with(table, n)?.t2.product();
    let ab = bracket_a(n)?.value_integer() * bracket_b(n)?.value_integer();
    let lhs = Expr::constant(BigRational::from_integer(BigInt::from(t2)));
    let mut rhs = Expr::constant(BigRational::from_integer(BigInt::from(ab << (n / 2))));
    if n % 2 == 1 {
        rhs = rhs * Expr::int(2).sqrt();
    }
    let cert = certify(&lhs, Relation::Lt, &rhs, max_precision)?;
    Ok(cert.with_claim(format!("T2 < 2^(n/2) A B at n = {n}")))
}
