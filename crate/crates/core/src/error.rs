//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A symbolic word is malformed (empty, too short, unparsable, ...).
    #[error("invalid word: {0}")]
    InvalidWord(String),

    /// Two words were required to differ in their first letter.
    #[error("words share a common prefix")]
    SharedPrefix,

    /// Two words were required to have equal length.
    #[error("word lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    /// A numeric argument is outside the admissible domain.
    #[error("out of domain: {0}")]
    Domain(String),

    /// A configured resource bound (depth, enumeration size, cells) was exceeded.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// A precondition of an operation does not hold for the given input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Hull construction received degenerate input (e.g. all points collinear).
    #[error("degenerate hull: {0}")]
    DegenerateHull(String),

    /// The requested case is handled elsewhere or not at all.
    #[error("unsupported case: {0}")]
    Unsupported(String),

    /// No positive clearance could be certified for a candidate gap segment.
    #[error("gap clearance not established: {0}")]
    InconclusiveGap(String),

    /// The perturbation solve could not bracket a solution.
    #[error("solve failed: {0}")]
    SolveFailure(String),

    /// The perturbation target is too large for the requested truncation order.
    #[error("magnitude check failed: {0}")]
    Magnitude(String),

    /// A named trap condition failed, with the observed shortfall.
    #[error("trap check failed [{check}]: {detail}")]
    TrapCheck { check: &'static str, detail: String },

    /// No hop chain exists at the requested subdivision depth.
    #[error("no chain at this depth: {0}")]
    IncreaseDepth(String),

    /// Text input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
