use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("alpha = {0} is outside (0, 1]")]
    AlphaOutOfRange(f64),
    #[error("series at x = {x} not certified after {terms} terms")]
    TruncationFailure { x: f64, terms: usize },
    #[error("value at x = {0} overflows f64")]
    Overflow(f64),
    #[error("argument {0} is outside the validated domain of the logarithm-like function")]
    OutsideValidatedDomain(f64),
    #[error("{0} is not supported for this operation")]
    UnsupportedKind(&'static str),
    #[error("no sign change found for {family} zero #{index}")]
    BracketNotFound { family: &'static str, index: usize },
    #[error("initial-value system is ill conditioned (condition number {cond:e})")]
    IllConditionedInitialSystem { cond: f64 },
    #[error("characteristic root finding failed: {0}")]
    RootFindingFailure(String),
    #[error("forcing term {0} is resonant")]
    ResonantFrequency(usize),
    #[error("matrix is numerically defective and no Jordan structure was supplied")]
    DefectiveWithoutStructure,
    #[error("gate value {value:e} is near zero (threshold {threshold:e}, nearest certified zero at distance {distance:e})")]
    AmbiguousNearZero { value: f64, threshold: f64, distance: f64 },
    #[error("rank decision ambiguous (sigma_min / sigma_max = {ratio:e})")]
    RankAmbiguous { ratio: f64 },
    #[error("adaptive quadrature did not converge (estimate {estimate:e})")]
    QuadratureFailure { estimate: f64 },
    #[error("basis function {0} is numerically dependent on its predecessors")]
    NearLinearDependence(usize),
    #[error("step too large: {0}")]
    StepTooLarge(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = core::result::Result<T, Error>;
