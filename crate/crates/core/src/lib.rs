//! Verification toolkit for primes in the interval (4n, 5n).
//!
//! Finite ranges are checked by sieving; analytic tail inequalities are
//! certified with exact rational enclosures. The modules build on each
//! other bottom-up:
//!
//! - [`sieve`]: segmented prime table, π(x), Chebyshev θ and ψ.
//! - [`exact`]: rationals, enclosures, log/exp/sqrt, expression trees and
//!   the adaptive-precision certifier.
//! - [`binom`]: valuations of C(5n, 4n), the T1/T2/T3 split and the bracket
//!   operator.
//! - [`bounds`]: Stirling envelopes and the auxiliary inequalities.
//! - [`theorems`]: base-case sweeps, the tail certificate and the
//!   consequences (four and seven primes, the prime-count lower bound).
//! - [`report`]: the machine-readable check report.
//! - [`arith`]: small integer helpers (product trees, trial division).

pub mod arith;
pub mod binom;
pub mod bounds;
pub mod error;
pub mod exact;
pub mod report;
pub mod sieve;
pub mod theorems;

pub use error::{Error, Result};
pub use exact::{BigRational, Certificate, Enclosure, Expr, Relation, Status};
