//! Rendering, file formats, configuration, the acceptance suite and the
//! command-line driver around `multicorn-core`.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod formats;
pub mod render;

use multicorn_core::arcs::ArcError;
use multicorn_core::fatou::FatouError;
use multicorn_core::orbits::OrbitError;
use multicorn_core::raster::RasterError;
use multicorn_core::renorm::RenormError;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("render budget exceeded after {elapsed_secs:.3} s")]
    BudgetExceeded { elapsed_secs: f64 },
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error(transparent)]
    Renorm(#[from] RenormError),
    #[error(transparent)]
    Fatou(#[from] FatouError),
    #[error(transparent)]
    Arc(#[from] ArcError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl LabError {
    /// Process exit code: 2 for bad arguments or configuration, 3 for
    /// numeric failures, 1 for IO.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) | LabError::Raster(RasterError::InvalidJob(_)) => 2,
            LabError::Io(_) => 1,
            _ => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LabError::Config(_) => "config",
            LabError::BudgetExceeded { .. } => "budget_exceeded",
            LabError::Numeric(_) => "numeric",
            LabError::Raster(_) => "raster",
            LabError::Renorm(_) => "renorm",
            LabError::Fatou(_) => "fatou",
            LabError::Arc(_) => "arc",
            LabError::Orbit(_) => "orbit",
            LabError::Io(_) => "io",
        }
    }

    /// One-line JSON error record.
    pub fn record(&self) -> String {
        serde_json::json!({ "error": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() }).to_string()
    }
}
