use thiserror::Error;

/// Errors raised by construction, validation and the operations on
/// picture fuzzy multisets.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PfmsError {
    #[error("{name} = {value} is outside [0, 1]")]
    OutOfUnitInterval { name: &'static str, value: f64 },

    #[error("grade sum {sum} exceeds 1")]
    SumExceedsOne { sum: f64 },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("point {point} has depth {found}, expected {expected}")]
    RaggedDepth {
        point: usize,
        expected: usize,
        found: usize,
    },

    #[error("positive degrees increase from level {level} to level {} at point {point}", level + 1)]
    SigmaOrderViolation { point: usize, level: usize },

    #[error("grade sequence must have at least one level")]
    EmptySequence,

    #[error("domain grid must contain at least one point")]
    EmptyGrid,

    #[error("domain coordinate {index} is not finite")]
    NonFiniteCoordinate { index: usize },

    #[error("domain coordinates {index} and {} coincide", index + 1)]
    DuplicateCoordinate { index: usize },

    #[error("domain coordinates are not increasing at index {index}")]
    UnsortedGrid { index: usize },

    #[error("x = {x} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("level {level} is out of range 1..={depth}")]
    BadLevel { level: usize, depth: usize },

    #[error("operands are defined on different domain grids")]
    GridMismatch,

    #[error("operands have different depths ({left} vs {right})")]
    DepthMismatch { left: usize, right: usize },

    #[error("weights sum to {sum}, expected 1")]
    WeightSumInvalid { sum: f64 },

    #[error("invalid generator configuration: {0}")]
    BadConfig(String),

    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

impl PfmsError {
    /// Stable identifier used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            PfmsError::OutOfUnitInterval { .. } => "OutOfUnitInterval",
            PfmsError::SumExceedsOne { .. } => "SumExceedsOne",
            PfmsError::LengthMismatch { .. } => "LengthMismatch",
            PfmsError::RaggedDepth { .. } => "RaggedDepth",
            PfmsError::SigmaOrderViolation { .. } => "SigmaOrderViolation",
            PfmsError::EmptySequence => "EmptySequence",
            PfmsError::EmptyGrid => "EmptyGrid",
            PfmsError::NonFiniteCoordinate { .. } => "NonFiniteCoordinate",
            PfmsError::DuplicateCoordinate { .. } => "DuplicateCoordinate",
            PfmsError::UnsortedGrid { .. } => "UnsortedGrid",
            PfmsError::OutOfDomain { .. } => "OutOfDomain",
            PfmsError::BadLevel { .. } => "BadLevel",
            PfmsError::GridMismatch => "GridMismatch",
            PfmsError::DepthMismatch { .. } => "DepthMismatch",
            PfmsError::WeightSumInvalid { .. } => "WeightSumInvalid",
            PfmsError::BadConfig(_) => "BadConfig",
            PfmsError::TooLarge(_) => "TooLarge",
            PfmsError::UnknownSuite(_) => "UnknownSuite",
        }
    }
}

pub type Result<T> = std::result::Result<T, PfmsError>;
