use thiserror::Error;

/// Errors produced by the crosswise toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The privacy constraint cannot be met (gamma must exceed pi0).
    #[error("infeasible design: gamma = {gamma} must exceed pi0 = {pi0}")]
    Infeasible { pi0: f64, gamma: f64 },

    /// An iterative numeric routine hit its iteration cap.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The sample-size search passed its cap without meeting the criterion.
    #[error("sample-size search exhausted: no n <= {cap} satisfies the criterion")]
    SearchExhausted { cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
