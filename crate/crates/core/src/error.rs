use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("cubic is unicritical (a1^2 = 3 a2); reduction to z^3 - 3z + a is undefined")]
    UnicriticalInput,
    #[error("root solver did not converge after {sweeps} sweeps (worst residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("point is a pole of the map")]
    PoleInput,
    #[error("a fixed point has multiplier 1; residue index undefined")]
    ParabolicFixedPoint,
    #[error("fixed-point data is not realizable by a relaxed Newton map: {0}")]
    NotRealizable(&'static str),
    #[error("fixed point {index}: multiplicity h/(1-mu) = {value} is not a positive integer")]
    NonIntegerMultiplicity { index: usize, value: f64 },
    #[error("construction failed verification: {0}")]
    VerificationFailure(&'static str),
    #[error("point is not an attracting root of the map")]
    NotAFixedRoot,
    #[error("palette has {have} colours but the image needs {need}")]
    PaletteTooSmall { need: usize, have: usize },
    #[error("not enough samples: need {need}, have {have}")]
    InsufficientSamples { need: usize, have: usize },
}
