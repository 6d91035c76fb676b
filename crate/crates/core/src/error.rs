use thiserror::Error;

/// Errors raised across the laboratory.
///
/// Hypothesis failures of the structure theorems are reported through
/// [`LabError::Hypothesis`] so that callers (the lab runner in particular) can
/// tell an invalid instance apart from a failed check.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid Blaschke product: {0}")]
    InvalidBlaschke(String),

    #[error("standing assumption violated: {0}")]
    StandingAssumption(String),

    #[error("frame mismatch: {0}")]
    FrameMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("hypothesis `{name}` violated: residual {residual:.3e} exceeds {tol:.3e}")]
    Hypothesis {
        name: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("iteration did not reach tail {target:.1e} within {steps} steps (last {last:.3e})")]
    NonConvergence { steps: usize, target: f64, last: f64 },

    #[error("symbol degree {degree} exceeds Taylor degree {taylor_degree}")]
    SymbolTooLong { degree: usize, taylor_degree: usize },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("schema: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl LabError {
    pub fn hypothesis(name: &'static str, residual: f64, tol: f64) -> Self {
        LabError::Hypothesis {
            name,
            residual,
            tol,
        }
    }

    /// True for errors that mean "the instance does not satisfy the theorem's
    /// hypotheses", as opposed to malformed input or I/O trouble.
    pub fn is_hypothesis(&self) -> bool {
        matches!(
            self,
            LabError::Hypothesis { .. } | LabError::StandingAssumption(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
