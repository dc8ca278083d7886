use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input lies outside the domain of a utility or discount function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A utility value has no preimage: the combination left u's image.
    #[error("image error: {0}")]
    Image(String),

    #[error("missing argument: {0}")]
    MissingArgument(&'static str),

    #[error("unknown state label `{0}`")]
    UnknownState(String),

    #[error("state space mismatch: {0}")]
    SpaceMismatch(String),

    /// A constructor rejected its parameters.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("LP dimension error: {0}")]
    Dimension(String),

    /// Carries a plain-text dump of the offending problem.
    #[error("LP numerical instability: {reason}\n{dump}")]
    NumericalInstability { reason: String, dump: String },
}
