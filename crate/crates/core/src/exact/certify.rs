//! Adaptive-precision certification of inequalities between expressions.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::enclosure::{Enclosure, GUARD_BITS};
use super::expr::{eval, Expr};
use crate::error::Result;

/// First rung of the precision ladder.
pub const START_PRECISION: u32 = 64;
/// Default ceiling of the ladder (64, 128, 256, 512).
pub const DEFAULT_MAX_PRECISION: u32 = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn is_strict(self) -> bool {
        matches!(self, Relation::Lt | Relation::Gt)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proved,
    Refuted,
    Undecided,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Proved => "proved",
            Status::Refuted => "refuted",
            Status::Undecided => "undecided",
        })
    }
}

/// Verdict on one inequality together with the separating margin.
///
/// The margin encloses `rhs − lhs` for `<`/`<=` and `lhs − rhs` for
/// `>`/`>=`, so a positive margin always means the claim holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: String,
    pub status: Status,
    pub margin: Enclosure,
    pub precision_used: u32,
}

impl Certificate {
    pub fn is_proved(&self) -> bool {
        self.status == Status::Proved
    }

    pub fn with_claim(mut self, claim: impl Into<String>) -> Self {
        self.claim = claim.into();
        self
    }
}

/// Status implied by a margin enclosure. Non-strict relations are proved by
/// strict separation or by an exact zero margin (both sides the same exact
/// rational); overlap without exact equality stays undecided.
pub fn decide(relation: Relation, margin: &Enclosure) -> Status {
    let exact_zero = margin.is_point() && margin.lo().is_zero();
    if margin.lo().is_positive() {
        Status::Proved
    } else if margin.hi().is_negative() {
        Status::Refuted
    } else if exact_zero {
        if relation.is_strict() {
            Status::Refuted
        } else {
            Status::Proved
        }
    } else {
        Status::Undecided
    }
}

/// Certifies `lhs relation rhs`, doubling precision from 64 bits until the
/// two enclosures separate or `max_precision` is reached.
pub fn certify(lhs: &Expr, relation: Relation, rhs: &Expr, max_precision: u32) -> Result<Certificate> {
    let claim = format!("{lhs} {relation} {rhs}");
    let mut precision = START_PRECISION.min(max_precision.max(1));
    loop {
        let l = eval(lhs, precision)?;
        let r = eval(rhs, precision)?;
        let bits = precision as u64 + GUARD_BITS;
        let margin = match relation {
            Relation::Lt | Relation::Le => r.sub(&l, bits),
            Relation::Gt | Relation::Ge => l.sub(&r, bits),
        };
        let status = decide(relation, &margin);
        if status != Status::Undecided || precision >= max_precision {
            return Ok(Certificate {
                claim,
                status,
                margin,
                precision_used: precision,
            });
        }
        precision = precision.saturating_mul(2).min(max_precision);
    }
}
