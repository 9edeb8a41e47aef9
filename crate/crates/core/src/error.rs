use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("an IFS needs at least two maps, got {0}")]
    TooFewMaps(usize),

    #[error("contraction ratio {0} is not certifiably inside (0, 1)")]
    InvalidRatio(String),

    #[error("matrix is not orthogonal: {0}")]
    NotOrthogonal(String),

    #[error("maps mix exact and interval scalars")]
    MixedModes,

    #[error("quotient is not contracting: ratio {0}")]
    NotContracting(String),

    #[error("the empty word has no cylinder map")]
    EmptyWord,

    #[error("symbol {symbol} out of range for a system with {maps} maps")]
    InvalidSymbol { symbol: usize, maps: usize },

    #[error("power must be at least 1")]
    ZeroPower,

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: usize,
        limit: usize,
    },

    #[error("index pair ({0}, {0}) is not a valid pair of distinct maps")]
    SelfPair(usize),

    #[error("index {index} out of range for {maps} maps")]
    IndexOutOfRange { index: usize, maps: usize },

    #[error("singular linear system")]
    Singular,

    #[error("comparison cannot be decided at current precision: {0}")]
    Undecidable(String),

    #[error("system is not certified to satisfy the strong separation condition")]
    NotSsc,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("inputs are incompatible: {0}")]
    InputsIncompatible(String),

    #[error("unsupported open-set witness shape: {0}")]
    UnsupportedWitnessShape(String),

    #[error("length mismatch: {0} coefficients for {1} vectors")]
    LengthMismatch(usize, usize),

    #[error("coefficients must be nonnegative and sum to 1: {0}")]
    BadCoefficients(String),

    #[error("empty input set")]
    EmptySet,
}

pub type Result<T> = std::result::Result<T, Error>;
