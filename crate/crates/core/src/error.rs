use thiserror::Error;

/// Errors produced by histogram construction, spline fitting, density
/// estimation, and corpus generation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("at least 2 samples are required, got {0}")]
    EmptyInput(usize),
    #[error("non-finite value at index {index}")]
    NonFiniteInput { index: usize },
    #[error("invalid weights: {0}")]
    InvalidWeights(&'static str),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("all samples are equal, range is zero")]
    ZeroRange,
    #[error("sample dispersion ({0}) is zero")]
    DegenerateDispersion(&'static str),
    #[error("invalid bin rule: {0}")]
    InvalidBinRule(String),
    #[error("bin counts sum to {actual}, expected {expected}")]
    CountMismatch { expected: u64, actual: u64 },
    #[error("histogram is not normalized: total mass {0}")]
    NotNormalized(f64),
    #[error("invalid histogram: {0}")]
    InvalidHistogram(&'static str),

    #[error("basis index {index} out of range (at most {max})")]
    IndexOutOfRange { index: usize, max: isize },
    #[error("degree {0} is too low for this operation")]
    DegreeTooLow(usize),
    #[error("too few points: {actual} given, {required} required")]
    TooFewPoints { actual: usize, required: usize },
    #[error("abscissae must be strictly increasing (violated at index {0})")]
    NonMonotoneKnots(usize),
    #[error("linear system is singular")]
    SingularSystem,
    #[error("{u} lies outside the support [{lo}, {hi}]")]
    OutOfSupport { u: f64, lo: f64, hi: f64 },

    #[error("{bins} bins are too few for the {boundary} boundary condition")]
    TooFewBins { bins: usize, boundary: &'static str },
    #[error("supports do not overlap")]
    DisjointSupports,
    #[error("grid size {actual} is below the minimum {min}")]
    InvalidGrid { actual: usize, min: usize },

    #[error("invalid braking scenario: {0}")]
    InvalidScenario(String),
    #[error("invalid corpus configuration: {0}")]
    InvalidRanges(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
