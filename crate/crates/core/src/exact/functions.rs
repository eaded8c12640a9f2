//! Certified bounds for log, exp, sqrt and π.
//!
//! Every series runs in fixed-point integer arithmetic with a lower and an
//! upper track: the lower track truncates, the upper track rounds up and
//! carries an explicit remainder bound. Nothing here touches floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::enclosure::{Enclosure, GUARD_BITS};
use super::rational::{round_ratio, BigRational, Rounding};
use crate::error::{Error, Result};

fn ceil_div(a: &BigInt, d: &BigInt) -> BigInt {
    -((-a).div_floor(d))
}

fn ceil_shift(a: &BigInt, f: u64) -> BigInt {
    debug_assert!(!a.is_negative());
    (a + ((BigInt::one() << f) - 1u32)) >> f
}

/// Bounds on `atanh(n/d) · 2^f` for `0 ≤ n/d ≤ 1/2`.
fn atanh_fixed(n: &BigInt, d: &BigInt, f: u64) -> (BigInt, BigInt) {
    debug_assert!(!n.is_negative() && d.is_positive());
    debug_assert!(n * 2u32 <= *d);
    let scaled = n << f;
    let z_lo = scaled.div_floor(d);
    let z_hi = ceil_div(&scaled, d);
    let z2_lo = (&z_lo * &z_lo) >> f;
    let z2_hi = ceil_shift(&(&z_hi * &z_hi), f);
    let (mut p_lo, mut p_hi) = (z_lo, z_hi);
    let (mut s_lo, mut s_hi) = (BigInt::zero(), BigInt::zero());
    let mut j: u64 = 0;
    loop {
        let div = BigInt::from(2 * j + 1);
        s_lo += &p_lo / &div;
        s_hi += ceil_div(&p_hi, &div);
        p_lo = (&p_lo * &z2_lo) >> f;
        p_hi = ceil_shift(&(&p_hi * &z2_hi), f);
        j += 1;
        if p_hi <= BigInt::one() {
            break;
        }
    }
    // Remaining terms sum to at most z^(2j+1) / (1 - z^2).
    let one = BigInt::one() << f;
    s_hi += ceil_div(&(&p_hi << f), &(one - &z2_hi));
    (s_lo, s_hi)
}

/// Bounds on `atan(1/k) · 2^f` for an integer `k ≥ 2`.
fn atan_inv_fixed(k: u64, f: u64) -> (BigInt, BigInt) {
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let one = BigInt::one() << f;
    let mut p_lo = one.div_floor(&k);
    let mut p_hi = ceil_div(&one, &k);
    let (mut s_lo, mut s_hi) = (BigInt::zero(), BigInt::zero());
    let mut j: u64 = 0;
    loop {
        let div = BigInt::from(2 * j + 1);
        if j.is_multiple_of(2) {
            s_lo += &p_lo / &div;
            s_hi += ceil_div(&p_hi, &div);
        } else {
            s_lo -= ceil_div(&p_hi, &div);
            s_hi -= &p_lo / &div;
        }
        j += 1;
        p_lo = &p_lo / &k2;
        p_hi = ceil_div(&p_hi, &k2);
        if p_hi <= BigInt::one() {
            break;
        }
    }
    // Alternating tail: bounded by the first omitted term.
    s_lo -= &p_hi;
    s_hi += &p_hi;
    (s_lo, s_hi)
}

fn fixed_bounds(lo: &BigInt, hi: &BigInt, f: u64, bits: u64) -> (BigRational, BigRational) {
    let scale = BigInt::one() << f;
    (
        round_ratio(lo, &scale, bits, Rounding::Down),
        round_ratio(hi, &scale, bits, Rounding::Up),
    )
}

/// Bounds on log q for q > 0, with `bits` working bits.
pub(crate) fn log_bounds(q: &BigRational, bits: u64) -> (BigRational, BigRational) {
    debug_assert!(q.is_positive());
    if q.is_one() {
        return (BigRational::zero(), BigRational::zero());
    }
    let a = q.numer();
    let b = q.denom();
    // Reduce q = 2^k · r with r in [3/4, 3/2).
    let mut k = q.log2_estimate();
    let scaled = |k: i64| -> (BigInt, BigInt) {
        if k >= 0 {
            (a.clone(), b << k as u64)
        } else {
            (a << (-k) as u64, b.clone())
        }
    };
    let (mut ra, mut rb) = scaled(k);
    loop {
        if &ra * 4u32 < &rb * 3u32 {
            k -= 1;
        } else if &ra * 2u32 >= &rb * 3u32 {
            k += 1;
        } else {
            break;
        }
        (ra, rb) = scaled(k);
    }
    let f = bits + 16 + (64 - k.unsigned_abs().leading_zeros() as u64);
    // log r = 2 atanh((r - 1)/(r + 1)), |(r-1)/(r+1)| ≤ 1/5.
    let zn = &ra - &rb;
    let zd = &ra + &rb;
    let (t_lo, t_hi) = atanh_fixed(&zn.abs(), &zd, f);
    let (mut lo, mut hi) = if zn.is_negative() {
        (-(t_hi << 1u32), -(t_lo << 1u32))
    } else {
        (t_lo << 1u32, t_hi << 1u32)
    };
    if k != 0 {
        let (l_lo, l_hi) = atanh_fixed(&BigInt::one(), &BigInt::from(3), f);
        let kk = BigInt::from(k) * 2u32;
        if k > 0 {
            lo += &kk * l_lo;
            hi += &kk * l_hi;
        } else {
            lo += &kk * l_hi;
            hi += &kk * l_lo;
        }
    }
    fixed_bounds(&lo, &hi, f, bits)
}

/// Bounds on e^q with `bits` working bits.
pub(crate) fn exp_bounds(q: &BigRational, bits: u64) -> (BigRational, BigRational) {
    if q.is_zero() {
        return (BigRational::one(), BigRational::one());
    }
    let an = q.numer().abs();
    let ad = q.denom();
    // Halve until t = |q| / 2^s ≤ 2^-8, square back afterwards.
    let s = (an.bits() as i64 - ad.bits() as i64 + 1).max(0) as u64 + 8;
    let f = bits + 16 + s;
    let t_num = &an << (f - s);
    let t_lo = t_num.div_floor(ad);
    let t_hi = ceil_div(&t_num, ad);
    let one = BigInt::one() << f;
    let (mut term_lo, mut term_hi) = (one.clone(), one.clone());
    let (mut sum_lo, mut sum_hi) = (BigInt::zero(), BigInt::zero());
    let mut j: u64 = 0;
    loop {
        sum_lo += &term_lo;
        sum_hi += &term_hi;
        j += 1;
        let jj = BigInt::from(j);
        term_lo = ((&term_lo * &t_lo) >> f) / &jj;
        term_hi = ceil_div(&ceil_shift(&(&term_hi * &t_hi), f), &jj);
        if term_hi <= BigInt::one() {
            break;
        }
    }
    // For t ≤ 1 the Taylor remainder is at most twice the first omitted term.
    sum_hi += &term_hi * 2u32;
    for _ in 0..s {
        sum_lo = (&sum_lo * &sum_lo) >> f;
        sum_hi = ceil_shift(&(&sum_hi * &sum_hi), f);
    }
    if q.is_positive() {
        fixed_bounds(&sum_lo, &sum_hi, f, bits)
    } else {
        (
            round_ratio(&one, &sum_hi, bits, Rounding::Down),
            round_ratio(&one, &sum_lo, bits, Rounding::Up),
        )
    }
}

/// Bounds on √q for q ≥ 0; exact when q is the square of a rational.
pub(crate) fn sqrt_bounds(q: &BigRational, bits: u64) -> (BigRational, BigRational) {
    debug_assert!(!q.is_negative());
    if q.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    if let Some(r) = q.exact_sqrt() {
        return (r.clone(), r);
    }
    let k = bits as i64 + 2 - q.log2_estimate().div_euclid(2);
    let x = if k >= 0 {
        (q.numer() << (2 * k) as u64).div_floor(q.denom())
    } else {
        q.numer().div_floor(&(q.denom() << (-2 * k) as u64))
    };
    let root = x.sqrt();
    let lo = BigRational::from_dyadic(root.clone(), -k);
    let hi = BigRational::from_dyadic(root + 1u32, -k);
    (lo.round_to_bits(bits, Rounding::Down), hi.round_to_bits(bits, Rounding::Up))
}

/// Bounds on π from Machin's formula π = 16·atan(1/5) − 4·atan(1/239).
pub(crate) fn pi_bounds(bits: u64) -> (BigRational, BigRational) {
    let f = bits + 16;
    let (a_lo, a_hi) = atan_inv_fixed(5, f);
    let (b_lo, b_hi) = atan_inv_fixed(239, f);
    let lo = (a_lo << 4u32) - (b_hi << 2u32);
    let hi = (a_hi << 4u32) - (b_lo << 2u32);
    fixed_bounds(&lo, &hi, f, bits)
}

fn working_bits(precision: u32) -> u64 {
    precision as u64 + GUARD_BITS
}

/// Enclosure of log q. Errors when q ≤ 0.
pub fn log_enclosure(q: &BigRational, precision: u32) -> Result<Enclosure> {
    if !q.is_positive() {
        return Err(Error::Domain(format!("log of nonpositive value {q}")));
    }
    let (lo, hi) = log_bounds(q, working_bits(precision));
    Ok(Enclosure::from_bounds(lo, hi))
}

/// Enclosure of e^q.
pub fn exp_enclosure(q: &BigRational, precision: u32) -> Enclosure {
    let (lo, hi) = exp_bounds(q, working_bits(precision));
    Enclosure::from_bounds(lo, hi)
}

/// Enclosure of √q. Errors when q < 0.
pub fn sqrt_enclosure(q: &BigRational, precision: u32) -> Result<Enclosure> {
    if q.is_negative() {
        return Err(Error::Domain(format!("sqrt of negative value {q}")));
    }
    let (lo, hi) = sqrt_bounds(q, working_bits(precision));
    Ok(Enclosure::from_bounds(lo, hi))
}

/// Enclosure of the circle constant π.
pub fn pi_enclosure(precision: u32) -> Enclosure {
    let (lo, hi) = pi_bounds(working_bits(precision));
    Enclosure::from_bounds(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        s.parse().unwrap()
    }

    // Decimal expansions to 40 digits, truncated (from an independent
    // multiprecision evaluation).
    const LN2: &str = "0.6931471805599453094172321214581765680755";
    const E: &str = "2.7182818284590452353602874713526624977572";
    const SQRT5: &str = "2.2360679774997896964091736687312762354406";
    const PI: &str = "3.1415926535897932384626433832795028841971";

    fn assert_brackets(e: &Enclosure, truncated: &str) {
        let v = q(truncated);
        let ulp = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(40));
        assert!(e.lo() <= &(&v + &ulp), "lo {} above {truncated}", e.lo().to_decimal(45));
        assert!(e.hi() >= &v, "hi {} below {truncated}", e.hi().to_decimal(45));
    }

    #[test]
    fn log_of_one_is_exact_zero() {
        let e = log_enclosure(&BigRational::one(), 64).unwrap();
        assert!(e.is_point());
        assert!(e.lo().is_zero());
    }

    #[test]
    fn log_two() {
        for p in [64, 128, 256, 512] {
            let e = log_enclosure(&BigRational::from_integer(2), p).unwrap();
            assert_brackets(&e, LN2);
            let bound = BigRational::new(BigInt::one(), BigInt::one() << p);
            assert!(e.width() <= bound);
        }
    }

    #[test]
    fn log_consistency_with_prime_powers() {
        // 3125/256 = 5^5 / 2^8
        let direct = log_enclosure(&q("3125/256"), 128).unwrap();
        let l5 = log_enclosure(&BigRational::from_integer(5), 128).unwrap();
        let l2 = log_enclosure(&BigRational::from_integer(2), 128).unwrap();
        let combined = l5
            .scale(&BigRational::from_integer(5), 200)
            .sub(&l2.scale(&BigRational::from_integer(8), 200), 200);
        assert!(direct.intersect(&combined).is_some());
    }

    #[test]
    fn log_domain() {
        assert!(log_enclosure(&BigRational::zero(), 64).is_err());
        assert!(log_enclosure(&q("-3"), 64).is_err());
    }

    #[test]
    fn log_width_scales_with_magnitude() {
        let huge = BigRational::from_integer(BigInt::from(7u32).pow(5000));
        let e = log_enclosure(&huge, 64).unwrap();
        let mag = e.hi().clone();
        let allowed = &mag / &BigRational::from_integer(BigInt::one() << 64u32);
        assert!(e.width() <= allowed);
    }

    #[test]
    fn exp_values() {
        let e0 = exp_enclosure(&BigRational::zero(), 64);
        assert!(e0.is_point() && e0.lo().is_one());
        let e1 = exp_enclosure(&BigRational::one(), 128);
        assert_brackets(&e1, E);
        let m = exp_enclosure(&q("-1"), 128);
        let prod = e1.mul(&m, 200);
        assert!(prod.contains(&BigRational::one()));
    }

    #[test]
    fn exp_relative_width() {
        for x in ["1/3", "-7/2", "40", "-40", "12345/7"] {
            let e = exp_enclosure(&q(x), 80);
            let rel = &e.width() / e.lo();
            assert!(rel <= BigRational::new(BigInt::one(), BigInt::one() << 80u32), "x = {x}");
        }
    }

    #[test]
    fn exp_lemma_exponent_at_threshold() {
        let t = q("1/409081") - q("1/327264") - q("1/81816");
        let e = exp_enclosure(&t, 64);
        assert!(e.lo() > &q("0.999986"));
    }

    #[test]
    fn sqrt_values() {
        let two = sqrt_enclosure(&BigRational::from_integer(4), 64).unwrap();
        assert!(two.is_point() && two.lo() == &BigRational::from_integer(2));
        let r5 = sqrt_enclosure(&BigRational::from_integer(5), 128).unwrap();
        assert_brackets(&r5, SQRT5);
        let r = sqrt_enclosure(&BigRational::from_integer(34090), 64).unwrap();
        assert!(r.lo() > &q("184.6347") && r.hi() < &q("184.6348"));
        assert!(sqrt_enclosure(&q("-1/2"), 64).is_err());
        let z = sqrt_enclosure(&BigRational::zero(), 64).unwrap();
        assert!(z.is_point());
    }

    #[test]
    fn pi_value() {
        for p in [32, 64, 128] {
            let e = pi_enclosure(p);
            assert_brackets(&e, PI);
            assert!(e.width() <= BigRational::new(BigInt::one(), BigInt::one() << (p - 2)));
        }
    }
}
