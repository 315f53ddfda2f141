use thiserror::Error;

/// Errors produced by construction and integration routines.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("non-finite input: {0}")]
    NonFinite(f64),

    #[error("not a valid lift: {0}")]
    InvalidLift(String),

    #[error("matrix determinant must be strictly positive, got {0}")]
    NonPositiveDeterminant(f64),

    #[error("bisection did not converge; input is not a homeomorphism to tolerance")]
    BisectionDiverged,

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("angular increment exceeded a quarter turn at the step-size floor dt = {dt_floor}")]
    StepFloorReached { dt_floor: f64 },
}

pub type Result<T> = std::result::Result<T, CoreError>;
