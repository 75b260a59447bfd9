use thiserror::Error;

/// Errors produced by the pinwheel library.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates an operation's precondition.
    #[error("invalid input: {0}")]
    Input(String),

    /// A requested computation would exceed a configured size budget.
    #[error("size limit exceeded: {0}")]
    Size(String),

    /// The correlation estimator cannot be evaluated on the given patch.
    #[error("estimator error: {0}")]
    Estimator(String),

    /// Argument outside the domain of a numerical function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A requested window falls outside the sampled range.
    #[error("range error: {0}")]
    Range(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
