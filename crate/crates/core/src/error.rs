use thiserror::Error;

/// Errors raised anywhere in the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter lists differ ({left} vs {right} parameters)")]
    ParameterMismatch { left: usize, right: usize },

    #[error("denominator is the zero polynomial")]
    ZeroDenominator,

    #[error("denominator vanishes at the given point")]
    Pole,

    #[error("value {value} of parameter `{name}` lies outside [{lower}, {upper}]")]
    OutOfBounds {
        name: String,
        value: String,
        lower: String,
        upper: String,
    },

    #[error("vertex enumeration over {0} parameters exceeds the limit of 20")]
    TooManyVertices(usize),

    #[error("invalid parameter declaration: {0}")]
    InvalidParameter(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("cycle detected among variables {0:?}")]
    Cycle(Vec<String>),

    #[error("instantiation is not well-formed: {0}")]
    NotWellFormed(String),

    #[error("joint state space of {0} outcomes exceeds the enumeration limit")]
    StateSpaceTooLarge(u128),

    #[error("conditioning event has probability zero")]
    ZeroProbabilityEvidence,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("variable order is not topological: {0}")]
    NotTopological(String),

    #[error("evidence-tailored construction needs nonempty evidence")]
    EmptyEvidence,

    #[error("state {0} loops on itself with probability one during elimination")]
    SureSelfLoop(usize),

    #[error("evidence has probability zero for every instantiation")]
    ImpossibleEvidence,

    #[error("transition {from} -> {to} is not a multi-affine polynomial")]
    NotMultiAffine { from: usize, to: usize },

    #[error("entry {row}:{column} of `{variable}` is not a multi-affine polynomial")]
    NotMultiAffineEntry { variable: String, row: usize, column: usize },

    #[error("region is not well-formed: {0}")]
    RegionNotWellFormed(String),

    #[error("no accepting region found at coverage {0}")]
    NoAcceptingRegion(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
