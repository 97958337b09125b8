use thiserror::Error;

use crate::lawrence::AxiomId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("legs {a_leg} and {b_leg} have the same tag and cannot be contracted")]
    TagMismatch { a_leg: usize, b_leg: usize },

    #[error("leg {0} is paired more than once")]
    DuplicateLeg(usize),

    #[error("leg {leg} out of range for a rank-{rank} tensor")]
    InvalidLeg { leg: usize, rank: usize },

    #[error("leg permutation is not a bijection")]
    InvalidPermutation,

    #[error("size limit exceeded: {0}")]
    TooLarge(String),

    #[error("signature mismatch: {0}")]
    Signature(String),

    #[error("P: {0}")]
    BasisPermutation(String),

    #[error("axiom ({0}) involves m but the algebra has no ternary tensor")]
    MissingM(AxiomId),

    #[error("h is singular")]
    SingularForm,

    #[error("h violates the form condition (residual {0:.3e})")]
    FormCondition(f64),

    #[error("{0} must be nonzero")]
    ZeroParameter(&'static str),

    #[error("tensor does not follow the two-dimensional variable pattern (deviation {0:.3e})")]
    Pattern(f64),

    #[error("q must be coprime to p")]
    NotCoprime,

    #[error("invalid lens parameters: {0}")]
    LensParameters(String),

    #[error("network has {0} open legs")]
    OpenNetwork(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{field}: {message}")]
    Format { field: String, message: String },
}

impl Error {
    pub(crate) fn format(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            field: field.into(),
            message: message.into(),
        }
    }
}
