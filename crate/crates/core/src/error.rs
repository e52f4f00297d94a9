use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The amplitude parameter does not describe a shock.
    #[error(
        "no shock for q_tilde = {q_tilde}: outside the admissible interval (3/4, 1) ({reason})"
    )]
    NoShock { q_tilde: f64, reason: &'static str },

    #[error("degenerate characteristic classification: eigenvalue {0:e} is numerically zero")]
    DegenerateClassification(f64),

    #[error("singular linearization: det B = {0:e}")]
    SingularLinearization(f64),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
