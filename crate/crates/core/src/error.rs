use thiserror::Error;

/// Errors raised by the numerical library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid quadrature spec: {0}")]
    InvalidQuadrature(String),

    #[error("quadrature did not converge after {subdivisions} subdivisions (error estimate {error_estimate:e})")]
    NonConvergence {
        subdivisions: usize,
        error_estimate: f64,
    },

    #[error("spin separation {r} must be at least 1")]
    InvalidSeparation { r: i64 },

    #[error("spin separation {r} exceeds the supported maximum {max}")]
    SeparationTooLarge { r: usize, max: usize },

    #[error("correlator `{name}` = {value} lies outside [-1, 1]")]
    CorrelatorOutOfRange { name: &'static str, value: f64 },

    #[error("state is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("closed-form denominator {value:e} is too close to zero")]
    SingularDenominator { value: f64 },

    #[error("Fisher information must be positive, got {value}")]
    NonpositiveInformation { value: f64 },

    #[error("repetition count must be at least 1")]
    InvalidRepetitions,

    #[error("chain size {n} outside supported range [{min}, {max}]")]
    SizeOutOfRange { n: usize, min: usize, max: usize },

    #[error("site pair ({i}, {j}) invalid for a chain of {n} spins")]
    IndexOutOfRange { i: usize, j: usize, n: usize },

    #[error("need at least {need} points, got {got}")]
    TooFewPoints { got: usize, need: usize },

    #[error("grid spacing is not uniform")]
    NonUniformGrid,

    #[error("no cusp found: maximum second difference {max_second_difference:e}")]
    FlatSeries { max_second_difference: f64 },

    #[error("operation requires a sweep along {expected}, got {got}")]
    WrongAxis {
        expected: &'static str,
        got: &'static str,
    },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("every row of the sweep failed; first error: {0}")]
    AllRowsFailed(Box<Error>),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),
}

pub type Result<T> = std::result::Result<T, Error>;
