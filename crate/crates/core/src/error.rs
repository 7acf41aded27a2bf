use thiserror::Error;

/// Errors produced by the walking model.
#[derive(Debug, Error)]
pub enum GaitError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("infeasible gait: pendular energy {energy} J does not exceed the critical energy {critical} J")]
    Infeasible { energy: f64, critical: f64 },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("no admissible stance at x = {x0}: surface too steep for the fixed opening angle")]
    NoStance { x0: f64 },

    #[error("no foot strike found before t = {horizon} s")]
    NoStrike { horizon: f64 },

    #[error("trailing foot clearance {clearance} m is below the surface at t = {t} s")]
    ClearanceViolation { clearance: f64, t: f64 },

    #[error("stride {index}: {source}")]
    Stride {
        index: usize,
        #[source]
        source: Box<GaitError>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl GaitError {
    /// Strips any stride annotation and returns the underlying error.
    pub fn root(&self) -> &GaitError {
        match self {
            GaitError::Stride { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, GaitError>;
