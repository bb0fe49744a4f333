use thiserror::Error;

/// Errors raised by the engine. Report-style checks never use these; they
/// return their findings as data instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbiparError {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("not invertible (valuation {valuation})")]
    NotInvertible { valuation: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no solution (rank {rank}, augmented rank {augmented_rank})")]
    NoSolution { rank: usize, augmented_rank: usize },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("not invariant (valuation {valuation})")]
    NotInvariant { valuation: usize },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("assembly error: condition ({condition}) {detail}")]
    Assembly { condition: String, detail: String },
    #[error("rank deficiency: found {found} of {expected} invariant generators")]
    RankDeficiency { found: usize, expected: usize },
    #[error("precision error: achievable precision {achievable}")]
    Precision { achievable: usize },
    #[error("weights undefined: {0}")]
    WeightsUndefined(String),
}

pub type Result<T> = std::result::Result<T, OrbiparError>;

pub(crate) fn structural(msg: impl Into<String>) -> OrbiparError {
    OrbiparError::Structural(msg.into())
}
