//! Certified analytic bounds: the Stirling envelopes, the auxiliary
//! inequalities used by the tail argument, the prime-counting bound, the
//! primorial bound and grid checks of the envelope-ratio monotonicity.

use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::binom::decompose_with;
use crate::error::{Error, Result};
use crate::exact::{certify, decide, eval, BigRational, Certificate, Enclosure, Expr, Relation, Status, GUARD_BITS};
use crate::report::{CheckReport, Item, Verdict};
use crate::sieve::{build_table, PrimeTable};

/// Constant of the prime-counting bound π(x) ≤ C·x/log x.
pub const PI_BOUND_CONSTANT: &str = "1.25506";
/// Twice [`PI_BOUND_CONSTANT`], the exponent constant of the T1 bound.
pub const T1_EXPONENT_CONSTANT: &str = "2.51012";
/// Lower bound for the exponential factor of the binomial estimate.
pub const EXP_FACTOR_LOWER: &str = "0.999986";
/// Constants of the binomial, A and B estimates and their combination.
pub const BINOMIAL_CONSTANT: &str = "0.446024";
pub const A_CONSTANT: &str = "1.576958";
pub const B_CONSTANT: &str = "5.153158";
pub const B_RATIO_CONSTANT: &str = "4.002202";
pub const CLOSING_CONSTANT: &str = "0.054886";
/// The intermediate constant printed in the closing inequality's argument.
pub const PRINTED_INTERMEDIATE: &str = "0.0742";

/// First n from which the exponential bound and the closing inequality are
/// claimed.
pub const TAIL_START: u64 = 6818;
/// First n from which the B ratio bound is claimed.
pub const RATIO_START: u64 = 6815;
/// Default grid density for the monotonicity checks, points per unit.
pub const GRID_DENSITY: i64 = 64;

fn rat(s: &str) -> BigRational {
    BigRational::parse(s).expect("valid constant")
}

fn q(n: u64) -> BigRational {
    BigRational::from_integer(n)
}

fn c(n: u64) -> Expr {
    Expr::constant(q(n))
}

/// l(x) = √(2π)·x^(x+1/2)·e^(−x+1/(12x+1)).
pub fn stirling_lower_expr(x: &BigRational) -> Expr {
    let tail = (BigRational::from_integer(12) * x + BigRational::one()).recip() - x;
    (Expr::int(2) * Expr::Pi).sqrt() * Expr::constant(x.clone()).pow(x + &BigRational::ratio(1, 2)) * Expr::constant(tail).exp()
}

/// u(x) = √(2π)·x^(x+1/2)·e^(−x+1/(12x)).
pub fn stirling_upper_expr(x: &BigRational) -> Expr {
    let tail = (BigRational::from_integer(12) * x).recip() - x;
    (Expr::int(2) * Expr::Pi).sqrt() * Expr::constant(x.clone()).pow(x + &BigRational::ratio(1, 2)) * Expr::constant(tail).exp()
}

/// The two Stirling envelopes at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingBounds {
    pub x: BigRational,
    pub lower: Expr,
    pub upper: Expr,
}

impl StirlingBounds {
    pub fn new(x: &BigRational) -> Result<StirlingBounds> {
        if *x < BigRational::one() {
            return Err(Error::Usage(format!("Stirling envelopes need x >= 1, got {x}")));
        }
        Ok(StirlingBounds {
            x: x.clone(),
            lower: stirling_lower_expr(x),
            upper: stirling_upper_expr(x),
        })
    }
}

/// Enclosures of l(x) and u(x).
pub fn stirling(x: &BigRational, precision: u32) -> Result<(Enclosure, Enclosure)> {
    let b = StirlingBounds::new(x)?;
    Ok((eval(&b.lower, precision)?, eval(&b.upper, precision)?))
}

/// One inequality check: the main certificate plus companion certificates
/// (equivalent forms, printed constants) and remarks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub check_id: String,
    pub n: u64,
    /// Whether n lies in the range where the inequality is claimed.
    pub in_range: bool,
    pub certificate: Certificate,
    pub companions: Vec<(String, Certificate)>,
    pub notes: Vec<String>,
}

impl LemmaCheck {
    pub fn status(&self) -> Status {
        self.certificate.status
    }

    /// Report with one item for the main certificate and one per companion.
    pub fn to_report(&self, precision: u32) -> CheckReport {
        let mut r = CheckReport::new(&self.check_id)
            .param("n", self.n)
            .param("precision", precision)
            .param("in_range", self.in_range);
        r.push(Item::from_certificate(format!("n={}", self.n), &self.certificate));
        for (name, cert) in &self.companions {
            r.push(Item::from_certificate(format!("n={} {name}", self.n), cert));
        }
        for note in &self.notes {
            r.note(note.clone());
        }
        if !self.in_range {
            r.note(format!("n = {} is outside the range where the inequality is claimed", self.n));
        }
        r
    }
}

/// Certificate recording whether two verdicts agree.
fn agreement(a: &Certificate, b: &Certificate, what: &str) -> Certificate {
    let agree = a.status == b.status && a.status != Status::Undecided;
    let margin = Enclosure::point(BigRational::from_integer(if agree { 1 } else { -1 }));
    Certificate {
        claim: format!("{what}: {} and {} agree", a.status, b.status),
        status: decide(Relation::Gt, &margin),
        margin,
        precision_used: a.precision_used.max(b.precision_used),
    }
}

/// (252n + 5)/(2880n² + 48n), the negated exponent of the first bound.
pub fn exp_factor_rational(n: u64) -> BigRational {
    let n = q(n);
    (BigRational::from_integer(252) * &n + BigRational::from_integer(5))
        / (BigRational::from_integer(2880) * &n * &n + BigRational::from_integer(48) * &n)
}

fn recip_linear(a: u64, b: u64, n: u64) -> BigRational {
    BigRational::from_integer(a * n + b).recip()
}

/// The four auxiliary inequalities, part 1..=4, at `n`.
pub fn lemma31_check(part: u32, n: u64, max_precision: u32) -> Result<LemmaCheck> {
    if n == 0 {
        return Err(Error::Usage("n must be positive".into()));
    }
    let check_id = format!("lemma-3.1.{part}");
    let zero = Expr::int(0);
    let one = Expr::int(1);
    let (in_range, certificate, companions) = match part {
        1 => {
            let exponent = recip_linear(60, 1, n) - recip_linear(48, 0, n) - recip_linear(12, 0, n);
            let main = certify(
                &Expr::constant(exponent.clone()).exp(),
                Relation::Ge,
                &Expr::lit(EXP_FACTOR_LOWER),
                max_precision,
            )?;
            let r = exp_factor_rational(n);
            let identity_margin = Enclosure::point(if exponent == -&r { BigRational::one() } else { -BigRational::one() });
            let identity = Certificate {
                claim: format!("exponent equals -(252n+5)/(2880n^2+48n) = -{r}"),
                status: decide(Relation::Gt, &identity_margin),
                margin: identity_margin,
                precision_used: 0,
            };
            let rational = certify(
                &Expr::constant(r.clone()),
                Relation::Le,
                &-Expr::lit(EXP_FACTOR_LOWER).log(),
                max_precision,
            )?;
            let printed = certify(&Expr::constant(r.clone()), Relation::Lt, &Expr::lit("0.000013"), max_precision)?;
            let loose = certify(&Expr::constant(r), Relation::Lt, &Expr::lit("0.000014"), max_precision)?;
            let agree = agreement(&main, &rational, "exponential and rational forms");
            let companions = vec![
                ("exact rational".to_string(), identity),
                ("rational form".to_string(), rational),
                ("below 0.000013".to_string(), printed),
                ("below 0.000014".to_string(), loose),
                ("forms agree".to_string(), agree),
            ];
            (n >= TAIL_START, main, companions)
        }
        2 | 3 => {
            let (a, b, cc, quad, lin) = if part == 2 { (30, 24, 6, 756, 30) } else { (20, 16, 4, 336, 20) };
            let exponent = recip_linear(a, 0, n) - recip_linear(b, 1, n) - recip_linear(cc, 1, n);
            let main = certify(&Expr::constant(exponent.clone()).exp(), Relation::Le, &one, max_precision)?;
            let sign = certify(&Expr::constant(exponent), Relation::Le, &zero, max_precision)?;
            let poly = BigRational::from_integer(quad) * q(n) * q(n) + BigRational::from_integer(lin) * q(n);
            let rational = certify(&one, Relation::Le, &Expr::constant(poly), max_precision)?;
            let agree = agreement(&main, &rational, "exponential and polynomial forms");
            let companions = vec![
                ("exponent nonpositive".to_string(), sign),
                (format!("1 <= {quad}n^2 + {lin}n"), rational),
                ("forms agree".to_string(), agree),
            ];
            (true, main, companions)
        }
        4 => {
            if n == 3 {
                return Err(Error::Domain("(4n+3)/(n-3) is undefined at n = 3".into()));
            }
            let ratio = (q(4 * n) + BigRational::from_integer(3)) / (q(n) - BigRational::from_integer(3));
            let main = certify(&Expr::constant(ratio), Relation::Lt, &Expr::lit(B_RATIO_CONSTANT), max_precision)?;
            let linear = rat("0.002202") * q(n) - rat("15.006606");
            let rational = certify(&zero, Relation::Lt, &Expr::constant(linear), max_precision)?;
            let agree = agreement(&main, &rational, "ratio and linear forms");
            let companions = vec![
                ("0 < 0.002202n - 15.006606".to_string(), rational),
                ("forms agree".to_string(), agree),
            ];
            (n >= RATIO_START, main, companions)
        }
        _ => return Err(Error::Usage(format!("part must be 1, 2, 3 or 4, got {part}"))),
    };
    Ok(LemmaCheck {
        check_id,
        n,
        in_range,
        certificate,
        companions,
        notes: Vec::new(),
    })
}

/// (1/6)(5 log 5 − 11 log 2), the left side of the closing inequality.
pub fn closing_lhs_expr() -> Expr {
    Expr::ratio(1, 6) * (Expr::int(5) * Expr::int(5).log() - Expr::int(11) * Expr::int(2).log())
}

/// 2.51012√5/√n + (3/2)(log n)/n − log(0.054886)/n.
pub fn closing_rhs_expr(n: u64) -> Expr {
    Expr::lit(T1_EXPONENT_CONSTANT) * Expr::int(5).sqrt() / c(n).sqrt() + Expr::ratio(3, 2) * (c(n).log() / c(n))
        - Expr::lit(CLOSING_CONSTANT).log() / c(n)
}

/// 0.054886·(3125/256)^(n/6)/(2^(n/2)·n^(3/2)).
pub fn closing_original_lhs(n: u64) -> Expr {
    let nq = q(n);
    Expr::lit(CLOSING_CONSTANT) * Expr::ratio(3125, 256).pow(&nq / &BigRational::from_integer(6))
        / (Expr::int(2).pow(&nq / &BigRational::from_integer(2)) * c(n).pow(BigRational::ratio(3, 2)))
}

/// (5n)^(2.51012√(5n)/log(5n)), written as exp(exponent·log(5n)).
pub fn t1_bound_expr(n: u64) -> Expr {
    let base = c(5 * n);
    let exponent = Expr::lit(T1_EXPONENT_CONSTANT) * base.clone().sqrt() / base.clone().log();
    (exponent * base.log()).exp()
}

/// The closing inequality at `n`, certified in its reduced logarithmic form,
/// with the original form as a consistency companion.
pub fn lemma32_check(n: u64, max_precision: u32) -> Result<LemmaCheck> {
    if n == 0 {
        return Err(Error::Usage("n must be positive".into()));
    }
    let lhs = closing_lhs_expr();
    let rhs = closing_rhs_expr(n);
    let main = certify(&lhs, Relation::Gt, &rhs, max_precision)?;
    let original = certify(&closing_original_lhs(n), Relation::Gt, &t1_bound_expr(n), max_precision)?.with_claim(format!(
        "0.054886*(3125/256)^(n/6)/(2^(n/2)*n^(3/2)) > (5n)^(2.51012*sqrt(5n)/log(5n)) at n = {n}"
    ));
    let agree = agreement(&main, &original, "reduced and original forms");
    let printed_lower = certify(&lhs, Relation::Gt, &Expr::lit(PRINTED_INTERMEDIATE), max_precision)?;
    let printed_upper = certify(&Expr::lit(PRINTED_INTERMEDIATE), Relation::Gt, &rhs, max_precision)?;
    let mut notes = Vec::new();
    if printed_lower.status == Status::Refuted {
        let value = eval(&lhs, 64)?;
        notes.push(format!(
            "discrepancy: the printed intermediate constant {PRINTED_INTERMEDIATE} is not below (1/6)(5 log 5 - 11 log 2) = {}...; \
             the end-to-end inequality is certified directly and does not depend on it",
            value.lo().to_decimal(10)
        ));
    }
    notes.push(format!(
        "printed chain link {PRINTED_INTERMEDIATE} > right-hand side: {}",
        printed_upper.status
    ));
    Ok(LemmaCheck {
        check_id: "lemma-3.2".into(),
        n,
        in_range: n >= TAIL_START,
        certificate: main,
        companions: vec![("original form".to_string(), original), ("forms agree".to_string(), agree)],
        notes,
    })
}

/// Certifies π(x) ≤ 1.25506·x/log x with the exact sieve count.
pub fn pi_upper_check(x: u64, max_precision: u32) -> Result<Certificate> {
    if x < 2 {
        return Err(Error::Usage(format!("the prime-counting bound needs x >= 2, got {x}")));
    }
    pi_upper_check_with(&build_table(x)?, x, max_precision)
}

/// As [`pi_upper_check`], reusing a table that covers x.
pub fn pi_upper_check_with(table: &PrimeTable, x: u64, max_precision: u32) -> Result<Certificate> {
    let count = table.prime_count(x)?;
    let bound = Expr::lit(PI_BOUND_CONSTANT) * c(x) / c(x).log();
    Ok(certify(&c(count), Relation::Le, &bound, max_precision)?.with_claim(format!("pi({x}) = {count} <= 1.25506*{x}/log({x})")))
}

/// The T1 bound with its chain of certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct T1Bound {
    pub n: u64,
    /// Enclosure of (5n)^(2.51012√(5n)/log(5n)).
    pub bound: Enclosure,
    /// T1 < (5n)^π(√(5n)), then (5n)^π(√(5n)) ≤ the bound.
    pub links: Vec<(String, Certificate)>,
}

impl T1Bound {
    pub fn proved(&self) -> bool {
        self.links.iter().all(|(_, c)| c.is_proved())
    }
}

/// Encloses the T1 bound and certifies the chain from the exact T1.
pub fn t1_bound(n: u64, max_precision: u32) -> Result<T1Bound> {
    if n < 2 {
        return Err(Error::Usage(format!("the T1 bound needs n >= 2, got {n}")));
    }
    t1_bound_with(&build_table(5 * n)?, n, max_precision)
}

/// As [`t1_bound`], reusing a table that covers 5n.
pub fn t1_bound_with(table: &PrimeTable, n: u64, max_precision: u32) -> Result<T1Bound> {
    let t1 = decompose_with(table, n)?.t1.product();
    let root = crate::arith::isqrt(5 * n);
    let count = table.prime_count(root)?;
    let power = num_traits::pow(BigInt::from(5 * n), count as usize);
    let power_expr = Expr::constant(BigRational::from_integer(power));
    let bound_expr = t1_bound_expr(n);
    let first = certify(
        &Expr::constant(BigRational::from_integer(BigInt::from(t1))),
        Relation::Lt,
        &power_expr,
        max_precision,
    )?
    .with_claim(format!("T1 < (5n)^pi(sqrt(5n)) = {}^{count} at n = {n}", 5 * n));
    let second = certify(&power_expr, Relation::Le, &bound_expr, max_precision)?
        .with_claim(format!("{}^{count} <= (5n)^(2.51012*sqrt(5n)/log(5n)) at n = {n}", 5 * n));
    let bound = eval(&bound_expr, max_precision)?;
    Ok(T1Bound {
        n,
        bound,
        links: vec![
            ("T1 below prime-count power".into(), first),
            ("power below analytic bound".into(), second),
        ],
    })
}

/// Points lo, lo + 1/density, … up to hi inclusive.
pub fn uniform_grid(lo: &BigRational, hi: &BigRational, density: i64) -> Vec<BigRational> {
    let step = BigRational::ratio(1, density);
    let mut out = Vec::new();
    let mut x = lo.clone();
    while x <= *hi {
        out.push(x.clone());
        x = x + &step;
    }
    out
}

/// u(x + c)/(l(c)·l(x)).
fn ratio_one(c: &BigRational, x: &BigRational) -> Expr {
    stirling_upper_expr(&(x + c)) / (stirling_lower_expr(c) * stirling_lower_expr(x))
}

/// h₂(x) = u(c)/(l(x)·l(c − x)).
fn ratio_two(c: &BigRational, x: &BigRational) -> Expr {
    stirling_upper_expr(c) / (stirling_lower_expr(x) * stirling_lower_expr(&(c - x)))
}

/// Grid check of the monotonicity of the envelope ratios. Part 1:
/// u(x+c)/(l(c)l(x)) nondecreasing for x ≥ 1/2, c ≥ 1/12. Part 2:
/// h₂(x) increasing up to c/2 and decreasing after, on [1/2, c − 1/2],
/// plus the symmetry h₂(x) = h₂(c − x).
pub fn lemma23_grid_check(part: u32, c: &BigRational, grid: &[BigRational], max_precision: u32) -> Result<CheckReport> {
    let start = Instant::now();
    let half = BigRational::ratio(1, 2);
    let mut points = grid.to_vec();
    points.sort();
    points.dedup();
    let mut report = CheckReport::new(format!("lemma-2.3.{part}"))
        .param("c", c)
        .param("points", points.len())
        .param("precision", max_precision);
    match part {
        1 => {
            if *c < BigRational::ratio(1, 12) {
                return Err(Error::Usage(format!("part 1 needs c >= 1/12, got {c}")));
            }
            if let Some(bad) = points.iter().find(|x| **x < half) {
                return Err(Error::Usage(format!("grid point {bad} below 1/2")));
            }
            for w in points.windows(2) {
                let cert = certify(&ratio_one(c, &w[0]), Relation::Le, &ratio_one(c, &w[1]), max_precision)?;
                report.push(Item::from_certificate(format!("g({}) <= g({})", w[0], w[1]), &cert));
            }
        }
        2 => {
            if !c.is_positive() {
                return Err(Error::Usage(format!("part 2 needs c > 0, got {c}")));
            }
            let top = c - &half;
            if let Some(bad) = points.iter().find(|x| **x < half || **x > top) {
                return Err(Error::Usage(format!("grid point {bad} outside [1/2, c - 1/2]")));
            }
            let mid = c / &BigRational::from_integer(2);
            for w in points.windows(2) {
                let (a, b) = (&w[0], &w[1]);
                if *b <= mid {
                    let cert = certify(&ratio_two(c, a), Relation::Lt, &ratio_two(c, b), max_precision)?;
                    report.push(Item::from_certificate(format!("h2({a}) < h2({b})"), &cert));
                } else if *a >= mid {
                    let cert = certify(&ratio_two(c, a), Relation::Gt, &ratio_two(c, b), max_precision)?;
                    report.push(Item::from_certificate(format!("h2({a}) > h2({b})"), &cert));
                } else {
                    let peak = ratio_two(c, &mid);
                    let left = certify(&ratio_two(c, a), Relation::Lt, &peak, max_precision)?;
                    let right = certify(&peak, Relation::Gt, &ratio_two(c, b), max_precision)?;
                    report.push(Item::from_certificate(format!("h2({a}) < h2({mid})"), &left));
                    report.push(Item::from_certificate(format!("h2({mid}) > h2({b})"), &right));
                }
            }
            for x in points.iter().filter(|x| **x < mid) {
                let mirror = c - x;
                let bits = max_precision as u64 + GUARD_BITS;
                let a = eval(&ratio_two(c, x), max_precision)?;
                let b = eval(&ratio_two(c, &mirror), max_precision)?;
                let consistent = a.intersect(&b).is_some();
                let item = Item::new(format!("h2({x}) = h2({mirror})"), Verdict::from_bool(consistent))
                    .with_margin(&a.sub(&b, bits))
                    .with_note("enclosures of both sides overlap");
                report.push(item);
            }
        }
        _ => return Err(Error::Usage(format!("part must be 1 or 2, got {part}"))),
    }
    Ok(report.timed(start))
}

/// Certifies ∏_{p ≤ x} p < 4^x for every real x ≤ `x_max`. Since the product
/// only changes at primes, it suffices to compare at primes; consecutive
/// primes within 1/8 of each other are grouped into blocks, and the log of
/// the product through the end of a block is compared with the block's
/// first prime times log 4.
pub fn primorial_check(table: &PrimeTable, x_max: u64, precision: u32) -> Result<CheckReport> {
    let start = Instant::now();
    let bits = precision as u64 + GUARD_BITS;
    let log4 = eval(&Expr::int(4).log(), precision)?;
    let mut theta = Enclosure::point(BigRational::zero());
    let mut report = CheckReport::new("primorial-bound")
        .param("x_max", x_max)
        .param("precision", precision);
    let primes: Vec<u64> = table.iter_range(2, x_max)?.collect();
    let mut worst: Option<(u64, Enclosure)> = None;
    let mut i = 0;
    let mut failed = None;
    while i < primes.len() {
        let first = primes[i];
        let mut j = i + 1;
        while j < primes.len() && primes[j] <= first + first / 8 && j - i < 4096 {
            j += 1;
        }
        let product = crate::arith::product_u64(primes[i..j].iter().copied());
        let l = crate::exact::log_enclosure(&BigRational::from_integer(BigInt::from(product)), precision)?;
        theta = theta.add(&l, bits);
        let margin = log4.scale(&q(first), bits).sub(&theta, bits);
        if !margin.lo().is_positive() {
            failed = Some((first, margin));
            break;
        }
        let relative = margin.lo() / &q(first);
        if worst.as_ref().is_none_or(|(p, m)| relative < m.lo() / &q(*p)) {
            worst = Some((first, margin));
        }
        i = j;
    }
    match failed {
        Some((p, m)) => report.push(
            Item::new(format!("theta(x) < x log 4 for x <= {x_max}"), Verdict::Undecided)
                .with_witness(p.to_string())
                .with_margin(&m),
        ),
        None => {
            let mut item =
                Item::new(format!("theta(x) < x log 4 for x <= {x_max}"), Verdict::Pass).with_note(format!("{} primes", primes.len()));
            if let Some((p, m)) = worst {
                item = item.with_witness(format!("tightest relative margin at {p}")).with_margin(&m);
            }
            report.push(item);
        }
    }
    Ok(report.timed(start))
}

/// The constants of the tail argument follow from one another:
/// 0.446024 ≤ √(5/(8π))·0.999986, 1.576958 ≥ (5/4)√(5/π),
/// 5.153158 ≥ √(125/(24π))·4.002202, 0.054886 ≤ 0.446024/(1.576958·5.153158).
pub fn constants_check(max_precision: u32) -> Result<Vec<(String, Certificate)>> {
    let pi = || Expr::Pi;
    let checks = [
        (
            "binomial constant",
            Expr::lit(BINOMIAL_CONSTANT),
            Relation::Le,
            (Expr::int(5) / (Expr::int(8) * pi())).sqrt() * Expr::lit(EXP_FACTOR_LOWER),
        ),
        (
            "A constant",
            Expr::lit(A_CONSTANT),
            Relation::Ge,
            Expr::ratio(5, 4) * (Expr::int(5) / pi()).sqrt(),
        ),
        (
            "B constant",
            Expr::lit(B_CONSTANT),
            Relation::Ge,
            (Expr::int(125) / (Expr::int(24) * pi())).sqrt() * Expr::lit(B_RATIO_CONSTANT),
        ),
        (
            "closing constant",
            Expr::lit(CLOSING_CONSTANT),
            Relation::Le,
            Expr::lit(BINOMIAL_CONSTANT) / (Expr::lit(A_CONSTANT) * Expr::lit(B_CONSTANT)),
        ),
    ];
    checks
        .into_iter()
        .map(|(name, lhs, rel, rhs)| Ok((name.to_string(), certify(&lhs, rel, &rhs, max_precision)?)))
        .collect()
}
