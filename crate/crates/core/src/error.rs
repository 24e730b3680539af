use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Fock truncation too small: n_max = {n_max}, need at least {required}")]
    TruncationTooSmall { n_max: usize, required: usize },

    #[error("wave packet touches the grid boundary{} (edge amplitude {amplitude:e})", .time.map(|t| format!(" at t = {t}")).unwrap_or_default())]
    BoundaryContact { amplitude: f64, time: Option<f64> },

    #[error("weak value undefined: pre- and post-selection are orthogonal")]
    OrthogonalSelection,

    #[error("expected-shift denominator vanishes")]
    VanishingDenominator,

    #[error("post-selection failed in round {round}: probability {probability:e}")]
    SelectionFailed { round: usize, probability: f64 },

    #[error("numerical integration diverged at t = {time}")]
    Diverged { time: f64 },

    #[error("step-size convergence gate failed: change {change:e} exceeds {tolerance:e}")]
    NotConverged { change: f64, tolerance: f64 },
}

impl Error {
    /// Errors raised by the numerics rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::TruncationTooSmall { .. }
                | Error::BoundaryContact { .. }
                | Error::SelectionFailed { .. }
                | Error::Diverged { .. }
                | Error::NotConverged { .. }
        )
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
