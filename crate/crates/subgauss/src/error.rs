//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by construction, evaluation and experiment routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid is empty")]
    EmptyGrid,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid search interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("zero must be strictly positive, got {0}")]
    NonPositiveZero(f64),

    #[error("gaussian coefficient must be nonnegative, got {0}")]
    NegativeGamma(f64),

    #[error("evaluation overflows double precision (exponent {0:.3e} log-units)")]
    OverflowGuard(f64),

    #[error("grid too small to resolve moment of order {order}: edge contribution {edge:.3e}")]
    GridMomentDiverged { order: usize, edge: f64 },

    #[error("(alpha, beta) = ({alpha}, {beta}) is not a characteristic-function pair")]
    NotACharacteristicFunction { alpha: f64, beta: f64 },

    #[error("argument {0} outside admissible domain {1}")]
    OutOfDomain(f64, &'static str),

    #[error("zero {0} lies on the imaginary axis; no admissible distribution exists")]
    ZeroOnImaginaryAxis(String),

    #[error("zero {zero} violates the pi/8 cone (angle {angle:.6} rad)")]
    AngleViolation { zero: String, angle: f64 },

    #[error("lambda = {lambda} below the admissible lower bound {bound:.6}")]
    LambdaTooSmall { lambda: f64, bound: f64 },

    #[error("zero set is empty")]
    EmptyZeroSet,

    #[error("all Fourier coefficients vanish")]
    AllZeroCoefficients,

    #[error("|c| = {c} exceeds the admissibility bound {c_max:.6e}")]
    CTooLarge { c: f64, c_max: f64 },

    #[error("moment constraints violated: {0}")]
    MomentConstraintViolated(String),

    #[error("sigma must exceed 1, got {0}")]
    SigmaOutOfRange(f64),

    #[error("argument {0} outside (0, 1)")]
    OutOfRange(f64),

    #[error("log-Laplace transform is not finite at t = {0}")]
    TransformDiverged(f64),

    #[error("density/normal ratio exceeds {threshold:.1e} on the trusted grid (max {max:.3e})")]
    RatioDiverged { max: f64, threshold: f64 },

    #[error("density is not standardized: {0}")]
    NotStandardized(String),

    #[error("circular convolution wrap-around mass {0:.3e} exceeds 1e-8")]
    AliasingDetected(f64),

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
