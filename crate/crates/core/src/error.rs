use thiserror::Error;

/// Errors surfaced by the numerical layers.
#[derive(Debug, Error)]
pub enum CoreError {
    /// An argument left the mathematical domain of an operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// A quadrature or moment computation could not reach its tolerance.
    #[error("tolerance failure in {op}: requested {requested:e}, achieved {achieved:e}")]
    Tolerance {
        op: &'static str,
        requested: f64,
        achieved: f64,
    },

    /// Sample vectors do not match the time grid they are used with.
    #[error("length mismatch: expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// The per-step linear system is numerically singular.
    #[error("singular step matrix at t = {t}: |pivot| = {pivot:e}")]
    SingularMatrix { t: f64, pivot: f64 },

    /// Invalid problem setup (coincident centers, empty grids, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl CoreError {
    pub fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        CoreError::Domain {
            op,
            msg: msg.into(),
        }
    }
}
