//! Error types shared across the crate.
//!
//! Every fallible operation returns [`Result`]. Errors split into two broad
//! families: input problems (syntax or semantic validation of matrices and
//! divisors) and guardrails (the wall-enumeration cap). A third kind,
//! [`Error::RouteDisagreement`], is a bug sentinel: it is produced when two
//! independent computations of the same quantity disagree, which should be
//! impossible on correct code and must never be swallowed.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// All errors produced by this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The textual or JSON form of a matrix could not be parsed.
    ///
    /// `line` is 1-based; `column` is a 1-based character offset when the
    /// offending token can be pinpointed.
    #[error("line {line}{}: {message}", .column.map(|c| format!(", column {c}")).unwrap_or_default())]
    MatrixSyntax {
        line: usize,
        column: Option<usize>,
        message: String,
    },

    /// The matrix parsed but violates a structural invariant
    /// (height below 1, an entry outside the strict upper triangle,
    /// a duplicated entry, ...).
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    /// A ray or row index outside `1..=r` (or a sign/index pair that does
    /// not name a ray of the fan).
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// A divisor expression could not be parsed.
    #[error("invalid divisor: {0}")]
    DivisorSyntax(String),

    /// Exhaustive wall enumeration was requested for a tower too tall for
    /// the configured cap. The wall count grows as `r * 2^(r-1)`, so the
    /// cap protects against accidental exponential blowups.
    #[error(
        "tower height {r} exceeds the exhaustive-enumeration cap {cap}; \
         raise the cap explicitly to force enumeration"
    )]
    OracleCap { r: usize, cap: usize },

    /// Two independent routes to the same answer disagreed. This is an
    /// internal-consistency failure, i.e. a bug in this crate, never a
    /// property of the input.
    #[error("internal consistency failure ({context}): {detail}")]
    RouteDisagreement { context: String, detail: String },
}
