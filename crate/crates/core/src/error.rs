use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed textual input (equation text, set file).
    #[error("parse error: {0}")]
    Parse(String),
    /// Well-formed input violating a precondition.
    #[error("validation error: {0}")]
    Validation(String),
    /// A value outside the admissible integer range.
    #[error("range error: {0}")]
    Range(String),
    /// A work budget was exhausted before an exact answer was reached.
    #[error("budget of {limit} steps exceeded during {stage}")]
    Budget { stage: &'static str, limit: u64 },
    #[error("fit error: {0}")]
    Fit(String),
    /// A checked invariant (or a theorem on concrete data) failed.
    #[error("invariant violation: {0}")]
    Invariant(String),
}
