use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector has no entries")]
    EmptyVector,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("evaluation point {0} coincides with an atom")]
    PoleAtAtom(f64),
    #[error("Cauchy transform vanishes at {0}")]
    PoleAtZeroOfG(f64),
    #[error("argument {z} outside the domain (-inf, {bound})")]
    OutsideDomain { z: f64, bound: f64 },
    #[error("value {y} outside the range ({lower}, inf)")]
    OutsideRange { y: f64, lower: f64 },
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("measure must be supported in [0, inf) and differ from the point mass at 0")]
    NonPositiveSupport,
    #[error("{solver} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error("invalid parameter t = {0}")]
    InvalidT(f64),
    #[error("invalid convolution power s = {0}")]
    InvalidPower(f64),
    #[error("index j = {j} out of range for k = {k}")]
    InvalidIndex { j: usize, k: usize },
    #[error("norm is not differentiable here; the maximum is attained at an atom by coordinates {maximizers:?}")]
    NonSmooth { maximizers: Vec<usize> },
    #[error("direction has repeated coordinates")]
    DegenerateDirection,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not a point of the probability simplex: {0}")]
    NotInSimplex(String),
    #[error("random matrix draw was rank deficient")]
    RankDeficient,
    #[error("rank {rank} outside 1..={max}")]
    InvalidRank { rank: usize, max: usize },
    #[error("weight {weight} times dimension {d} is not an integer")]
    DimensionNotDivisible { weight: f64, d: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Short machine-readable tag, used in structured error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyVector => "empty_vector",
            Error::InvalidMeasure(_) => "invalid_measure",
            Error::PoleAtAtom(_) => "pole_at_atom",
            Error::PoleAtZeroOfG(_) => "pole_at_zero_of_g",
            Error::OutsideDomain { .. } => "outside_domain",
            Error::OutsideRange { .. } => "outside_range",
            Error::ZeroArgument => "zero_argument",
            Error::NonPositiveSupport => "non_positive_support",
            Error::NoConvergence { .. } => "no_convergence",
            Error::InvalidT(_) => "invalid_t",
            Error::InvalidPower(_) => "invalid_power",
            Error::InvalidIndex { .. } => "invalid_index",
            Error::NonSmooth { .. } => "non_smooth",
            Error::DegenerateDirection => "degenerate_direction",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotInSimplex(_) => "not_in_simplex",
            Error::RankDeficient => "rank_deficient",
            Error::InvalidRank { .. } => "invalid_rank",
            Error::DimensionNotDivisible { .. } => "dimension_not_divisible",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
