//! Exact rational numbers over `num_bigint::BigInt`.
//!
//! Values are kept canonical: positive denominator, numerator and
//! denominator coprime. Reduction goes through a remainder-first gcd, which
//! keeps the common case of a very large numerator over a small (or
//! power-of-two) denominator linear in the operand size.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exact rational number in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigRational {
    num: BigInt,
    den: BigInt,
}

/// Rounding direction for conversions to bounded-size dyadic rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// gcd of |a| and |b|.
pub(crate) fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut x = a.magnitude().clone();
    let mut y = b.magnitude().clone();
    if x.is_zero() {
        return BigInt::from(y);
    }
    if y.is_zero() {
        return BigInt::from(x);
    }
    let tz = x.trailing_zeros().unwrap().min(y.trailing_zeros().unwrap());
    x >>= x.trailing_zeros().unwrap();
    y >>= y.trailing_zeros().unwrap();
    loop {
        if x < y {
            std::mem::swap(&mut x, &mut y);
        }
        if y.is_zero() {
            break;
        }
        if x.bits() <= 128 {
            let g = gcd_u128(x.to_u128().unwrap(), y.to_u128().unwrap());
            x = BigUint::from(g);
            break;
        }
        x %= &y;
    }
    BigInt::from(x << tz)
}

fn is_power_of_two(v: &BigInt) -> bool {
    v.sign() == Sign::Plus && v.bits() - 1 == v.trailing_zeros().unwrap()
}

impl BigRational {
    /// Builds `num/den` in canonical form. Panics on a zero denominator.
    pub fn new(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (mut num, mut den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_one() {
            return Self { num, den };
        }
        if is_power_of_two(&den) {
            let shift = num.trailing_zeros().unwrap().min(den.trailing_zeros().unwrap());
            num >>= shift;
            den >>= shift;
            return Self { num, den };
        }
        let g = gcd(&num, &den);
        if !g.is_one() {
            num /= &g;
            den /= &g;
        }
        Self { num, den }
    }

    /// `num/den` for parts already known to be canonical.
    pub(crate) fn new_raw(num: BigInt, den: BigInt) -> Self {
        debug_assert!(den.is_positive());
        Self { num, den }
    }

    pub fn from_integer<T: Into<BigInt>>(v: T) -> Self {
        Self {
            num: v.into(),
            den: BigInt::one(),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(BigInt::from(num), BigInt::from(den))
    }

    /// `m · 2^exp` in canonical form.
    pub fn from_dyadic(m: BigInt, exp: i64) -> Self {
        if m.is_zero() {
            return Self::zero();
        }
        let tz = m.trailing_zeros().unwrap();
        let m = m >> tz;
        let exp = exp + tz as i64;
        if exp >= 0 {
            Self::new_raw(m << exp as u64, BigInt::one())
        } else {
            Self::new_raw(m, BigInt::one() << (-exp) as u64)
        }
    }

    pub fn zero() -> Self {
        Self {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.num.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Self::new_raw(self.num.abs(), self.den.clone())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        if self.num.is_negative() {
            Self::new_raw(-self.den.clone(), -self.num.clone())
        } else {
            Self::new_raw(self.den.clone(), self.num.clone())
        }
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    pub fn ceil(&self) -> BigInt {
        -((-&self.num).div_floor(&self.den))
    }

    /// Fractional part `{x} = x − [x]`, in `[0, 1)`.
    pub fn fract(&self) -> Self {
        Self::new_raw(self.num.mod_floor(&self.den), self.den.clone())
    }

    /// Combined bit size of numerator and denominator.
    pub fn bit_size(&self) -> u64 {
        self.num.bits() + self.den.bits()
    }

    /// Exponent estimate: for nonzero x, `2^(e-1) < |x| < 2^(e+1)` with
    /// `e = bits(num) - bits(den)`.
    pub fn log2_estimate(&self) -> i64 {
        self.num.bits() as i64 - self.den.bits() as i64
    }

    /// Exact integer power.
    pub fn pow(&self, exp: i64) -> Self {
        if exp == 0 {
            return Self::one();
        }
        let e = exp.unsigned_abs();
        let e32 = u32::try_from(e).expect("exponent too large for exact power");
        let r = Self::new_raw(
            num_traits::pow(self.num.clone(), e32 as usize),
            num_traits::pow(self.den.clone(), e32 as usize),
        );
        // Powers of a canonical fraction stay canonical; only the sign of
        // the denominator needs care, and it is already positive.
        if exp < 0 {
            r.recip()
        } else {
            r
        }
    }

    /// Exact square root when both parts are perfect squares.
    pub fn exact_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.num.magnitude();
        let d = self.den.magnitude();
        let rn = n.sqrt();
        let rd = d.sqrt();
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            Some(Self::new_raw(BigInt::from(rn), BigInt::from(rd)))
        } else {
            None
        }
    }

    /// Rounds to a dyadic rational with at most `bits` significant bits in
    /// the requested direction.
    pub fn round_to_bits(&self, bits: u64, dir: Rounding) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        if is_power_of_two(&self.den) && self.num.bits() <= bits {
            return self.clone();
        }
        round_ratio(&self.num, &self.den, bits, dir)
    }

    /// Approximate value as f64; saturates to ±inf or 0 for extreme values.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // 64 significant bits are plenty for an f64 rendering.
        let r = round_ratio(&self.num, &self.den, 64, Rounding::Down);
        let (m, e) = dyadic_parts(&r);
        let mf = m.to_f64().unwrap_or(f64::NAN);
        if e > 2000 {
            return if mf > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if e < -2200 {
            return 0.0;
        }
        mf * 2f64.powi(e as i32)
    }

    /// Decimal rendering with `digits` significant digits; scientific
    /// notation outside `1e-6 ≤ |x| < 1e16`. Truncates toward zero.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let neg = self.is_negative();
        let a = self.abs();
        // Decimal exponent estimate from the binary one, then corrected.
        let mut e10 = ((a.log2_estimate() as f64) * std::f64::consts::LOG10_2).floor() as i64;
        let ten = BigInt::from(10u32);
        let scaled = |e10: i64| -> BigInt {
            let shift = digits as i64 - 1 - e10;
            if shift >= 0 {
                let p = num_traits::pow(ten.clone(), shift as usize);
                (&a.num * p).div_floor(&a.den)
            } else {
                let p = num_traits::pow(ten.clone(), (-shift) as usize);
                a.num.div_floor(&(&a.den * p))
            }
        };
        let mut m = scaled(e10);
        loop {
            let len = m.to_string().len();
            if len > digits {
                e10 += 1;
                m = scaled(e10);
            } else if len < digits {
                e10 -= 1;
                m = scaled(e10);
            } else {
                break;
            }
        }
        let s = m.to_string();
        let sign = if neg { "-" } else { "" };
        if (-6..16).contains(&e10) {
            if e10 >= 0 {
                let int_len = (e10 + 1) as usize;
                if int_len >= s.len() {
                    format!("{sign}{s}{}", "0".repeat(int_len - s.len()))
                } else {
                    let frac = s[int_len..].trim_end_matches('0');
                    if frac.is_empty() {
                        format!("{sign}{}", &s[..int_len])
                    } else {
                        format!("{sign}{}.{frac}", &s[..int_len])
                    }
                }
            } else {
                let zeros = (-e10 - 1) as usize;
                let frac = format!("{}{}", "0".repeat(zeros), s);
                format!("{sign}0.{}", frac.trim_end_matches('0'))
            }
        } else {
            let frac = s[1..].trim_end_matches('0');
            if frac.is_empty() {
                format!("{sign}{}e{e10}", &s[..1])
            } else {
                format!("{sign}{}.{frac}e{e10}", &s[..1])
            }
        }
    }

    /// Parses `a`, `a/b`, decimals such as `0.054886`, and an optional
    /// exponent (`1.5e-3`).
    pub fn parse(s: &str) -> Result<Self, Error> {
        let bad = || Error::Usage(format!("not a rational number: {s:?}"));
        let t = s.trim();
        if t.is_empty() {
            return Err(bad());
        }
        if let Some((a, b)) = t.split_once('/') {
            let n = BigInt::from_str(a.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(b.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Domain(format!("zero denominator in {s:?}")));
            }
            return Ok(Self::new(n, d));
        }
        let (mant, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (neg, mant) = match mant.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mant.strip_prefix('+').unwrap_or(mant)),
        };
        let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
        if neg {
            n = -n;
        }
        let scale = exp - frac_part.len() as i64;
        let ten = BigInt::from(10u32);
        let r = if scale >= 0 {
            Self::from_integer(n * num_traits::pow(ten, scale as usize))
        } else {
            Self::new(n, num_traits::pow(ten, (-scale) as usize))
        };
        Ok(r)
    }
}

/// Splits a dyadic rational into `(m, e)` with value `m · 2^e`.
fn dyadic_parts(r: &BigRational) -> (BigInt, i64) {
    debug_assert!(is_power_of_two(&r.den));
    (r.num.clone(), -((r.den.bits() - 1) as i64))
}

/// Rounds `num/den` (den > 0) to `bits` significant bits.
pub(crate) fn round_ratio(num: &BigInt, den: &BigInt, bits: u64, dir: Rounding) -> BigRational {
    if num.is_zero() {
        return BigRational::zero();
    }
    let e = num.bits() as i64 - den.bits() as i64;
    // |num/den| · 2^k lies in [2^(bits-1), 2^(bits+1)).
    let k = bits as i64 - e;
    let (n, d) = if k >= 0 {
        (num << k as u64, den.clone())
    } else {
        (num.clone(), den << (-k) as u64)
    };
    let m = match dir {
        Rounding::Down => n.div_floor(&d),
        Rounding::Up => -((-n).div_floor(&d)),
    };
    BigRational::from_dyadic(m, -k)
}

impl Default for BigRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for BigRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for BigRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bit_size() > 512 {
            write!(f, "BigRational(~{})", self.to_decimal(12))
        } else {
            write!(f, "BigRational({self})")
        }
    }
}

impl FromStr for BigRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Self::parse(s)
    }
}

impl Serialize for BigRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BigRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl From<i64> for BigRational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl From<u64> for BigRational {
    fn from(v: u64) -> Self {
        Self::from_integer(v)
    }
}

impl From<BigInt> for BigRational {
    fn from(v: BigInt) -> Self {
        Self::from_integer(v)
    }
}

impl From<BigUint> for BigRational {
    fn from(v: BigUint) -> Self {
        Self::from_integer(BigInt::from(v))
    }
}

impl Ord for BigRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        // Magnitudes more than a factor 4 apart need no multiplication.
        let (ea, eb) = (self.log2_estimate(), other.log2_estimate());
        if ea > eb + 1 {
            return if sa > 0 { Ordering::Greater } else { Ordering::Less };
        }
        if eb > ea + 1 {
            return if sa > 0 { Ordering::Less } else { Ordering::Greater };
        }
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for BigRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn add_impl(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.den == b.den {
        return BigRational::new(&a.num + &b.num, a.den.clone());
    }
    if a.den.is_one() {
        return BigRational::new_raw(&a.num * &b.den + &b.num, b.den.clone());
    }
    if b.den.is_one() {
        return BigRational::new_raw(&b.num * &a.den + &a.num, a.den.clone());
    }
    let g = gcd(&a.den, &b.den);
    if g.is_one() {
        return BigRational::new_raw(&a.num * &b.den + &b.num * &a.den, &a.den * &b.den);
    }
    let ad = &a.den / &g;
    let bd = &b.den / &g;
    let num = &a.num * &bd + &b.num * &ad;
    // Any common factor of num and the full denominator divides g.
    let g2 = gcd(&num, &g);
    let den = &ad * &b.den;
    if g2.is_one() {
        BigRational::new_raw(num, den)
    } else {
        BigRational::new_raw(num / &g2, den / &g2)
    }
}

fn mul_impl(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() || b.is_zero() {
        return BigRational::zero();
    }
    let g1 = gcd(&a.num, &b.den);
    let g2 = gcd(&b.num, &a.den);
    let (an, bd) = if g1.is_one() {
        (a.num.clone(), b.den.clone())
    } else {
        (&a.num / &g1, &b.den / &g1)
    };
    let (bn, ad) = if g2.is_one() {
        (b.num.clone(), a.den.clone())
    } else {
        (&b.num / &g2, &a.den / &g2)
    };
    BigRational::new_raw(an * bn, ad * bd)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a BigRational> for &'a BigRational {
            type Output = BigRational;
            fn $method(self, rhs: &'a BigRational) -> BigRational {
                $body(self, rhs)
            }
        }
        impl $trait<BigRational> for BigRational {
            type Output = BigRational;
            fn $method(self, rhs: BigRational) -> BigRational {
                $body(&self, &rhs)
            }
        }
        impl<'a> $trait<&'a BigRational> for BigRational {
            type Output = BigRational;
            fn $method(self, rhs: &'a BigRational) -> BigRational {
                $body(&self, rhs)
            }
        }
        impl<'a> $trait<BigRational> for &'a BigRational {
            type Output = BigRational;
            fn $method(self, rhs: BigRational) -> BigRational {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, |a: &BigRational, b: &BigRational| add_impl(a, &-b));
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, |a: &BigRational, b: &BigRational| mul_impl(a, &b.recip()));

impl Neg for BigRational {
    type Output = BigRational;
    fn neg(self) -> BigRational {
        BigRational::new_raw(-self.num, self.den)
    }
}

impl Neg for &BigRational {
    type Output = BigRational;
    fn neg(self) -> BigRational {
        BigRational::new_raw(-&self.num, self.den.clone())
    }
}
