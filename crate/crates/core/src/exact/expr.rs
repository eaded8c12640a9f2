//! Expression trees over exact constants and log/exp/sqrt/powers, with
//! certified interval evaluation.

use std::fmt;
use std::ops;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::enclosure::{Enclosure, GUARD_BITS};
use super::functions::pi_bounds;
use super::rational::BigRational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(BigRational),
    /// The circle constant.
    Pi,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Log(Box<Expr>),
    Exp(Box<Expr>),
    Sqrt(Box<Expr>),
    Pow(Box<Expr>, BigRational),
}

impl Expr {
    pub fn constant(q: BigRational) -> Expr {
        Expr::Const(q)
    }

    pub fn int(v: i64) -> Expr {
        Expr::Const(BigRational::from_integer(v))
    }

    pub fn ratio(num: i64, den: i64) -> Expr {
        Expr::Const(BigRational::ratio(num, den))
    }

    /// Literal constant such as `"0.054886"` or `"168033/100000"`.
    /// Panics on malformed input; meant for constants written in code.
    pub fn lit(s: &str) -> Expr {
        Expr::Const(BigRational::parse(s).unwrap_or_else(|e| panic!("bad literal {s:?}: {e}")))
    }

    pub fn log(self) -> Expr {
        Expr::Log(Box::new(self))
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }

    pub fn sqrt(self) -> Expr {
        Expr::Sqrt(Box::new(self))
    }

    pub fn pow(self, exponent: BigRational) -> Expr {
        Expr::Pow(Box::new(self), exponent)
    }

    pub fn powi(self, exponent: i64) -> Expr {
        Expr::Pow(Box::new(self), BigRational::from_integer(exponent))
    }

    /// Certified enclosure of the value at the given precision.
    pub fn eval(&self, precision: u32) -> Result<Enclosure> {
        eval(self, precision)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(q) if !q.is_integer() || q.is_negative() => 2,
            _ => 5,
        }
    }
}

/// Evaluates `expr` into an enclosure, rounding outward at every node.
pub fn eval(expr: &Expr, precision: u32) -> Result<Enclosure> {
    eval_bits(expr, precision as u64 + GUARD_BITS)
}

fn in_subterm(e: &Expr, err: Error) -> Error {
    match err {
        Error::Domain(msg) if !msg.starts_with("in `") => Error::Domain(format!("in `{e}`: {msg}")),
        other => other,
    }
}

fn eval_bits(expr: &Expr, bits: u64) -> Result<Enclosure> {
    let r = match expr {
        Expr::Const(q) => Enclosure::point(q.clone()),
        Expr::Pi => {
            let (lo, hi) = pi_bounds(bits);
            Enclosure::from_bounds(lo, hi)
        }
        Expr::Add(a, b) => eval_bits(a, bits)?.add(&eval_bits(b, bits)?, bits),
        Expr::Sub(a, b) => eval_bits(a, bits)?.sub(&eval_bits(b, bits)?, bits),
        Expr::Mul(a, b) => eval_bits(a, bits)?.mul(&eval_bits(b, bits)?, bits),
        Expr::Div(a, b) => {
            let num = eval_bits(a, bits)?;
            let den = eval_bits(b, bits)?;
            num.div(&den, bits).map_err(|e| in_subterm(expr, e))?
        }
        Expr::Neg(a) => eval_bits(a, bits)?.neg(),
        Expr::Log(a) => eval_bits(a, bits)?.log(bits).map_err(|e| in_subterm(expr, e))?,
        Expr::Exp(a) => eval_bits(a, bits)?.exp(bits),
        Expr::Sqrt(a) => eval_bits(a, bits)?.sqrt(bits).map_err(|e| in_subterm(expr, e))?,
        Expr::Pow(base, q) => eval_pow(&eval_bits(base, bits)?, q, bits).map_err(|e| in_subterm(expr, e))?,
    };
    Ok(r)
}

fn eval_pow(base: &Enclosure, q: &BigRational, bits: u64) -> Result<Enclosure> {
    if q.is_integer() {
        let e = q
            .numer()
            .to_i64()
            .ok_or_else(|| Error::Domain(format!("integer exponent {q} out of range")))?;
        return base.powi(e, bits);
    }
    if *q == BigRational::ratio(1, 2) {
        return base.sqrt(bits);
    }
    if base.is_point() && base.lo().is_zero() && q.is_positive() {
        return Ok(Enclosure::point(BigRational::zero()));
    }
    if !base.is_positive() {
        return Err(Error::Domain(format!("base of fractional power {q} not certified positive")));
    }
    Ok(base.log(bits)?.scale(q, bits).exp(bits))
}

fn fmt_const(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        return write!(f, "{q}");
    }
    // Terminating decimals read better than their fraction form.
    let den = q.denom();
    let mut pow10 = BigInt::one();
    for digits in 0..=12usize {
        if (&pow10 % den).is_zero() {
            let scaled = q.numer() * (&pow10 / den);
            let s = scaled.to_string();
            let (sign, mag) = s.strip_prefix('-').map_or(("", s.as_str()), |m| ("-", m));
            let padded = format!("{:0>width$}", mag, width = digits + 1);
            let (i, frac) = padded.split_at(padded.len() - digits);
            return write!(f, "{sign}{i}.{frac}");
        }
        pow10 *= 10u32;
    }
    write!(f, "{q}")
}

fn fmt_child(child: &Expr, parent_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if child.precedence() < parent_prec {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(q) => fmt_const(q, f),
            Expr::Pi => write!(f, "pi"),
            Expr::Add(a, b) => {
                fmt_child(a, 1, f)?;
                write!(f, " + ")?;
                fmt_child(b, 2, f)
            }
            Expr::Sub(a, b) => {
                fmt_child(a, 1, f)?;
                write!(f, " - ")?;
                fmt_child(b, 2, f)
            }
            Expr::Mul(a, b) => {
                fmt_child(a, 2, f)?;
                write!(f, "*")?;
                fmt_child(b, 3, f)
            }
            Expr::Div(a, b) => {
                fmt_child(a, 2, f)?;
                write!(f, "/")?;
                fmt_child(b, 3, f)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                fmt_child(a, 3, f)
            }
            Expr::Log(a) => write!(f, "log({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Pow(a, q) => {
                fmt_child(a, 5, f)?;
                if q.is_integer() && !q.is_negative() {
                    write!(f, "^{q}")
                } else {
                    write!(f, "^(")?;
                    fmt_const(q, f)?;
                    write!(f, ")")
                }
            }
        }
    }
}

macro_rules! expr_binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);
expr_binop!(Div, div, Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl From<BigRational> for Expr {
    fn from(q: BigRational) -> Expr {
        Expr::Const(q)
    }
}
