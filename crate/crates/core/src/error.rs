use thiserror::Error;

/// Errors raised by the geometry, cap and classification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("points live in different ambient dimensions ({0} and {1})")]
    MixedDimension(usize, usize),

    #[error("ambient dimension {0} is outside 1..=16")]
    BadDimension(usize),

    #[error("mask {mask:#x} does not fit in dimension {n}")]
    MaskOutOfRange { mask: u32, n: usize },

    #[error("input set is empty")]
    EmptyInput,

    #[error("duplicate point {0:#x}")]
    DuplicatePoint(u32),

    #[error("point {0:#x} is not in the affine span of the basis")]
    NotInSpan(u32),

    #[error("basis is affinely dependent")]
    DependentBasis,

    #[error("map dimension {map} does not match set dimension {set}")]
    DimensionMismatch { map: usize, set: usize },

    #[error("set is not a cap: {0:?} is a quad")]
    NotACap([u32; 4]),

    #[error("invalid basis: {0}")]
    InvalidBasis(&'static str),

    #[error("dependent index {0} out of range")]
    BadIndex(usize),

    #[error("basis exchange hypothesis violated: {0}")]
    ExchangeHypothesisViolated(&'static str),

    #[error("basis exchange produced supports that disagree with the closed form for {0:#x}")]
    ExchangePrediction(u32),

    #[error("set of size {size} exceeds the limit of {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("expected a cap of affine dimension {expected}, found {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("dimension {0} exceeds the classification limit of 8")]
    Overflow(usize),

    #[error("search up to size {0} did not close; the maximum is not determined")]
    Truncated(usize),

    #[error("unknown template label {0:?}")]
    UnknownLabel(String),

    #[error("cannot parse extended type {0:?}")]
    BadExtendedType(String),
}

pub type Result<T> = std::result::Result<T, Error>;
