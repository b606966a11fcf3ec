use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("operation unsupported for this oscillator family: {0}")]
    Unsupported(String),

    #[error("initial data violates the Wronskian normalization: W = {got} (want 1)")]
    WronskianViolation { got: String },

    #[error("step size underflow at t = {t}; last good state kept up to there")]
    StepSizeUnderflow { t: f64 },

    #[error("integration exceeded {max_steps} steps near t = {t}")]
    MaxStepsExceeded { t: f64, max_steps: usize },

    #[error("quadrature failed to reach tolerance {tol} on [{a}, {b}]")]
    QuadratureFailure { a: f64, b: f64, tol: f64 },

    #[error("truncation budget violated: need dimension >= {required}, got {got}")]
    TruncationBudget { required: usize, got: usize },

    #[error("amplitude node too close at (q = {q}, t = {t}); quantum potential undefined")]
    NodeProximity { q: f64, t: f64 },

    #[error("grid too coarse for 4th-order stencils: estimated error {estimate} > {allowed}")]
    GridTooCoarse { estimate: f64, allowed: f64 },

    #[error("config parse error at line {line}: {msg}")]
    ConfigParse { line: usize, msg: String },

    #[error("config constraint violated for key `{key}`: {msg}")]
    ConfigConstraint { key: String, msg: String },

    #[error("empty ensemble: at least one initial position is required")]
    EmptyEnsemble,

    #[error("missing input file: {0}")]
    MissingInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
