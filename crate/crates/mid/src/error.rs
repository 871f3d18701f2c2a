use thiserror::Error;

/// Crate-wide error type; `exit_code` maps variants onto the CLI contract
/// (2 precondition/domain, 3 numerical failure, 4 I/O).
#[derive(Debug, Error)]
pub enum Error {
    #[error("scaling undefined: j_x = 0")]
    ScalingUndefined,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate double-root denominators at k_hat^2 = 3 (k_hat = {k_hat}, beta_hat = {beta_hat})")]
    DegenerateDoubleRoot { k_hat: f64, beta_hat: f64 },

    #[error("contraction failure: L = {l} > 1/2 at delta = {delta}; choose a smaller interval")]
    ContractionFailure { l: f64, delta: f64 },

    #[error("iteration failed to converge: {0}")]
    NonConvergence(String),

    #[error("domain end reached at x = {reached} (D -> 0 before x_end = {x_end})")]
    DomainEnd { reached: f64, x_end: f64 },

    #[error("requirement {which} violated: {detail}")]
    RequirementViolation { which: String, detail: String },

    #[error("pole of the tangent form at x = {pole} (requested x = {x})")]
    Pole { pole: f64, x: f64 },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("invalid sweep specification: {0}")]
    SpecInvalid(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 4,
            Error::NonConvergence(_) | Error::ContractionFailure { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
