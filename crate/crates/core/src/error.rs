use thiserror::Error;

/// Errors surfaced by the library. Verdicts (refuted, undecided, failed
/// sweeps) are never errors; they live in certificates and reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on the arguments was violated.
    #[error("usage error: {0}")]
    Usage(String),
    /// A value fell outside the domain of an operation (log of a
    /// nonpositive number, division by an enclosure containing zero).
    #[error("domain error: {0}")]
    Domain(String),
    /// A query went past the range a prime table was built for.
    #[error("out of range: {0}")]
    OutOfRange(String),
    /// Precision was exhausted before a search could decide.
    #[error("undecided: {0}")]
    Undecided(String),
}

pub type Result<T> = std::result::Result<T, Error>;
