use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A construction-time axiom sweep failed; `witness` is the offending tuple.
    #[error("construction failed: {reason} (witness {witness:?})")]
    Construction { reason: String, witness: Vec<f64> },

    #[error("no witness found: {0}")]
    WitnessNotFound(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no common fixed point within budget: best candidate {best}, residual {residual}")]
    NotConverged { best: f64, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
