//! Closed rational intervals with outward rounding.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::functions::{exp_bounds, log_bounds, sqrt_bounds};
use super::rational::{BigRational, Rounding};
use crate::error::{Error, Result};

/// Extra working bits carried on top of the requested precision.
pub const GUARD_BITS: u64 = 24;

/// Exact point values above this bit size are rounded like any other
/// enclosure endpoint.
pub const EXACT_BITS_CUTOFF: u64 = 1_000_000;

/// A pair of exact rationals bracketing a real value.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enclosure {
    lo: BigRational,
    hi: BigRational,
}

impl Enclosure {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::Usage(format!("empty enclosure [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub(crate) fn from_bounds(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi, "inverted bounds");
        Self { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        Self { lo: v.clone(), hi: v }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_enclosure(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) * BigRational::ratio(1, 2)
    }

    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = if self.lo >= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi <= other.hi { &self.hi } else { &other.hi };
        (lo <= hi).then(|| Self {
            lo: lo.clone(),
            hi: hi.clone(),
        })
    }

    /// Certainly positive.
    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.lo.is_negative()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Outward rounding of both endpoints to `bits` significant bits.
    /// Exact points below the size cutoff are left untouched.
    pub fn round(self, bits: u64) -> Self {
        if self.is_point() && self.lo.bit_size() <= EXACT_BITS_CUTOFF {
            return self;
        }
        Self {
            lo: self.lo.round_to_bits(bits, Rounding::Down),
            hi: self.hi.round_to_bits(bits, Rounding::Up),
        }
    }

    pub fn add(&self, other: &Enclosure, bits: u64) -> Enclosure {
        Self {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
        .round(bits)
    }

    pub fn sub(&self, other: &Enclosure, bits: u64) -> Enclosure {
        Self {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
        .round(bits)
    }

    pub fn neg(&self) -> Enclosure {
        Self {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, other: &Enclosure, bits: u64) -> Enclosure {
        if self.is_point() && other.is_point() {
            return Self::point(&self.lo * &other.lo).round(bits);
        }
        if self.is_nonnegative() && other.is_nonnegative() {
            return Self {
                lo: &self.lo * &other.lo,
                hi: &self.hi * &other.hi,
            }
            .round(bits);
        }
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Self { lo, hi }.round(bits)
    }

    /// Multiplication by an exact rational.
    pub fn scale(&self, q: &BigRational, bits: u64) -> Enclosure {
        self.mul(&Enclosure::point(q.clone()), bits)
    }

    pub fn recip(&self, bits: u64) -> Result<Enclosure> {
        if self.contains_zero() {
            return Err(Error::Domain(format!(
                "division by an enclosure containing zero [{}, {}]",
                self.lo.to_decimal(12),
                self.hi.to_decimal(12)
            )));
        }
        Ok(Self {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        }
        .round(bits))
    }

    pub fn div(&self, other: &Enclosure, bits: u64) -> Result<Enclosure> {
        if other.contains_zero() {
            return Err(Error::Domain(format!(
                "division by an enclosure containing zero [{}, {}]",
                other.lo.to_decimal(12),
                other.hi.to_decimal(12)
            )));
        }
        if self.is_point() && other.is_point() {
            return Ok(Self::point(&self.lo / &other.lo).round(bits));
        }
        let quotients = [
            &self.lo / &other.lo,
            &self.lo / &other.hi,
            &self.hi / &other.lo,
            &self.hi / &other.hi,
        ];
        let lo = quotients.iter().min().unwrap().clone();
        let hi = quotients.iter().max().unwrap().clone();
        Ok(Self { lo, hi }.round(bits))
    }

    /// Integer power. Exact for points while the result stays below the
    /// size cutoff; otherwise repeated squaring with directed rounding.
    pub fn powi(&self, exp: i64, bits: u64) -> Result<Enclosure> {
        if exp < 0 {
            return self.powi(-exp, bits)?.recip(bits);
        }
        if exp == 0 {
            return Ok(Self::point(BigRational::one()));
        }
        let e = exp as u64;
        if self.is_point() && self.lo.bit_size().saturating_mul(e) <= EXACT_BITS_CUTOFF {
            return Ok(Self::point(self.lo.pow(exp)));
        }
        let pow_nonneg = |x: &BigRational, dir: Rounding| pow_rounded(x, e, bits, dir);
        let r = if self.is_nonnegative() {
            Self {
                lo: pow_nonneg(&self.lo, Rounding::Down),
                hi: pow_nonneg(&self.hi, Rounding::Up),
            }
        } else if !self.hi.is_positive() {
            let mag = Self {
                lo: pow_nonneg(&-&self.hi, Rounding::Down),
                hi: pow_nonneg(&-&self.lo, Rounding::Up),
            };
            if e % 2 == 1 {
                mag.neg()
            } else {
                mag
            }
        } else if e % 2 == 1 {
            Self {
                lo: -pow_nonneg(&-&self.lo, Rounding::Up),
                hi: pow_nonneg(&self.hi, Rounding::Up),
            }
        } else {
            let m = if -&self.lo > self.hi { -&self.lo } else { self.hi.clone() };
            Self {
                lo: BigRational::zero(),
                hi: pow_nonneg(&m, Rounding::Up),
            }
        };
        Ok(r)
    }

    pub fn log(&self, bits: u64) -> Result<Enclosure> {
        if !self.is_positive() {
            return Err(Error::Domain(format!(
                "log argument not certified positive: [{}, {}]",
                self.lo.to_decimal(12),
                self.hi.to_decimal(12)
            )));
        }
        if self.is_point() {
            let (lo, hi) = log_bounds(&self.lo, bits);
            return Ok(Self { lo, hi });
        }
        Ok(Self {
            lo: log_bounds(&self.lo, bits).0,
            hi: log_bounds(&self.hi, bits).1,
        })
    }

    pub fn exp(&self, bits: u64) -> Enclosure {
        if self.is_point() {
            let (lo, hi) = exp_bounds(&self.lo, bits);
            return Self { lo, hi };
        }
        Self {
            lo: exp_bounds(&self.lo, bits).0,
            hi: exp_bounds(&self.hi, bits).1,
        }
    }

    pub fn sqrt(&self, bits: u64) -> Result<Enclosure> {
        if !self.is_nonnegative() {
            return Err(Error::Domain(format!(
                "sqrt argument not certified nonnegative: [{}, {}]",
                self.lo.to_decimal(12),
                self.hi.to_decimal(12)
            )));
        }
        if self.is_point() {
            let (lo, hi) = sqrt_bounds(&self.lo, bits);
            return Ok(Self { lo, hi });
        }
        Ok(Self {
            lo: sqrt_bounds(&self.lo, bits).0,
            hi: sqrt_bounds(&self.hi, bits).1,
        })
    }
}

fn pow_rounded(x: &BigRational, mut e: u64, bits: u64, dir: Rounding) -> BigRational {
    let mut base = x.clone();
    let mut acc = BigRational::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = (&acc * &base).round_to_bits(bits, dir);
        }
        e >>= 1;
        if e > 0 {
            base = (&base * &base).round_to_bits(bits, dir);
        }
    }
    acc
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_decimal(20), self.hi.to_decimal(20))
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(lo: i64, hi: i64) -> Enclosure {
        Enclosure::new(BigRational::from_integer(lo), BigRational::from_integer(hi)).unwrap()
    }

    #[test]
    fn rejects_inverted_bounds() {
        assert!(Enclosure::new(BigRational::one(), BigRational::zero()).is_err());
    }

    #[test]
    fn interval_multiplication_signs() {
        assert_eq!(e(-2, 3).mul(&e(-5, 4), 64), e(-15, 12));
        assert_eq!(e(-3, -2).mul(&e(4, 5), 64), e(-15, -8));
        assert_eq!(e(2, 3).mul(&e(4, 5), 64), e(8, 15));
    }

    #[test]
    fn powers() {
        assert_eq!(e(-2, 3).powi(2, 64).unwrap(), e(0, 9));
        assert_eq!(e(-2, 3).powi(3, 64).unwrap(), e(-8, 27));
        assert_eq!(e(-3, -2).powi(2, 64).unwrap(), e(4, 9));
        assert_eq!(e(-3, -2).powi(3, 64).unwrap(), e(-27, -8));
        let p = Enclosure::point(BigRational::ratio(3, 2)).powi(-2, 64).unwrap();
        assert_eq!(p, Enclosure::point(BigRational::ratio(4, 9)));
        assert!(e(-1, 1).powi(-1, 64).is_err());
    }

    #[test]
    fn rounded_powers_enclose_the_exact_value() {
        let x = Enclosure::new(BigRational::ratio(99, 100), BigRational::ratio(101, 100)).unwrap();
        let p = x.powi(1001, 40).unwrap();
        assert!(p.lo() <= &BigRational::ratio(99, 100).pow(1001));
        assert!(p.hi() >= &BigRational::ratio(101, 100).pow(1001));
    }

    #[test]
    fn division_by_zero_straddle_is_domain_error() {
        assert!(matches!(e(1, 2).div(&e(-1, 1), 64), Err(Error::Domain(_))));
        assert_eq!(e(2, 4).div(&e(1, 2), 64).unwrap(), e(1, 4));
    }

    #[test]
    fn rounding_keeps_small_points_exact() {
        let third = Enclosure::point(BigRational::ratio(1, 3));
        assert!(third.clone().round(8).is_point());
        let wide = Enclosure::new(BigRational::ratio(1, 3), BigRational::ratio(2, 3)).unwrap().round(8);
        assert!(wide.contains(&BigRational::ratio(1, 3)) && wide.contains(&BigRational::ratio(2, 3)));
    }
}
