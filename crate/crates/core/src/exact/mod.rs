//! Exact rational arithmetic, certified enclosures of transcendental values
//! and the inequality certifier built on them.

mod certify;
mod enclosure;
mod expr;
mod functions;
mod rational;

pub use certify::{certify, decide, Certificate, Relation, Status, DEFAULT_MAX_PRECISION, START_PRECISION};
pub use enclosure::{Enclosure, EXACT_BITS_CUTOFF, GUARD_BITS};
pub use expr::{eval, Expr};
pub use functions::{exp_enclosure, log_enclosure, pi_enclosure, sqrt_enclosure};
pub use rational::{BigRational, Rounding};
