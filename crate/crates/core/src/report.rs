//! Machine-readable outcome of a check: per-instance verdicts with exact
//! margins, parameters, timing and version stamps.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::exact::{Certificate, Enclosure, Status};

/// Version of the report layout; bumped on incompatible field changes.
pub const SCHEMA_VERSION: &str = "1";
/// Digits shown in the convenience decimal rendering of margins.
pub const DECIMAL_DIGITS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Undecided,
}

impl Verdict {
    /// Combines verdicts: any fail wins, then any undecided, else pass.
    pub fn combine<I: IntoIterator<Item = Verdict>>(verdicts: I) -> Verdict {
        let mut out = Verdict::Pass;
        for v in verdicts {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Undecided => out = Verdict::Undecided,
                Verdict::Pass => {}
            }
        }
        out
    }

    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl From<Status> for Verdict {
    fn from(s: Status) -> Verdict {
        match s {
            Status::Proved => Verdict::Pass,
            Status::Refuted => Verdict::Fail,
            Status::Undecided => Verdict::Undecided,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Undecided => "undecided",
        })
    }
}

/// An enclosure rendered losslessly as "num/den" strings (always with an
/// explicit denominator) plus decimal conveniences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Margin {
    pub lo: String,
    pub hi: String,
    pub lo_decimal: String,
    pub hi_decimal: String,
}

impl From<&Enclosure> for Margin {
    fn from(e: &Enclosure) -> Margin {
        Margin {
            lo: format!("{}/{}", e.lo().numer(), e.lo().denom()),
            hi: format!("{}/{}", e.hi().numer(), e.hi().denom()),
            lo_decimal: e.lo().to_decimal(DECIMAL_DIGITS),
            hi_decimal: e.hi().to_decimal(DECIMAL_DIGITS),
        }
    }
}

/// One checked instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub instance: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<Margin>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Item {
    pub fn new(instance: impl Into<String>, verdict: Verdict) -> Item {
        Item {
            instance: instance.into(),
            verdict,
            witness: None,
            margin: None,
            note: None,
        }
    }

    /// Item carrying a certificate's verdict, margin and claim.
    pub fn from_certificate(instance: impl Into<String>, cert: &Certificate) -> Item {
        Item::new(instance, cert.status.into())
            .with_margin(&cert.margin)
            .with_note(cert.claim.clone())
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Item {
        self.witness = Some(witness.into());
        self
    }

    pub fn with_margin(mut self, margin: &Enclosure) -> Item {
        self.margin = Some(margin.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Item {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Versions {
    pub artifact: String,
    pub schema: String,
}

impl Default for Versions {
    fn default() -> Versions {
        Versions {
            artifact: env!("CARGO_PKG_VERSION").to_string(),
            schema: SCHEMA_VERSION.to_string(),
        }
    }
}

/// Outcome of one check. `status` is derived from the items: pass iff every
/// item passes, fail if any fails, undecided otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub params: BTreeMap<String, String>,
    pub status: Verdict,
    pub items: Vec<Item>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Wall-clock time in milliseconds.
    pub timing: u64,
    pub versions: Versions,
}

impl CheckReport {
    pub fn new(check_id: impl Into<String>) -> CheckReport {
        CheckReport {
            check_id: check_id.into(),
            params: BTreeMap::new(),
            status: Verdict::Pass,
            items: Vec::new(),
            notes: Vec::new(),
            timing: 0,
            versions: Versions::default(),
        }
    }

    pub fn param(mut self, key: impl Into<String>, value: impl ToString) -> CheckReport {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn push(&mut self, item: Item) {
        self.status = Verdict::combine([self.status, item.verdict]);
        self.items.push(item);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Recomputes `status` from the items (after direct edits to `items`).
    pub fn refresh_status(&mut self) {
        self.status = Verdict::combine(self.items.iter().map(|i| i.verdict));
    }

    /// Stamps the elapsed time since `start`.
    pub fn timed(mut self, start: Instant) -> CheckReport {
        self.timing = start.elapsed().as_millis() as u64;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Verdict::Pass
    }

    /// Items whose verdict is not pass.
    pub fn failures(&self) -> impl Iterator<Item = &Item> {
        self.items.iter().filter(|i| i.verdict != Verdict::Pass)
    }
}
