use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported description: {0}")]
    UnsupportedDescription(String),
    #[error("unknown marked word `{0}`")]
    UnknownMarkedWord(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("diagram is disconnected")]
    DisconnectedDiagram,
    #[error("crossing index {index} out of range ({count} crossings)")]
    Index { index: usize, count: usize },
    #[error("no restart converged below tolerance {tol:e} (best residual {best:e})")]
    NoConvergence { tol: f64, best: f64 },
    #[error("internal error: {0}")]
    Internal(String),
    #[error("inconsistent inputs: {0}")]
    InconsistentInputs(String),
    #[error("genus mismatch: expected {expected}, got {got}")]
    GenusMismatch { expected: usize, got: usize },
    #[error("unsupported cobordism: {0}")]
    UnsupportedCobordism(String),
    #[error("sampling failure: {0}")]
    SamplingFailure(String),
    #[error("Cerf move not applicable: {0}")]
    MoveNotApplicable(String),
    #[error("chain is not closed: {0}")]
    OpenChain(String),
}

impl Error {
    /// Errors caused by user input, as opposed to search or convergence failures.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::NoConvergence { .. } | Error::SamplingFailure(_) | Error::Internal(_)
        )
    }
}
