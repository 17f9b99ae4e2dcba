use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    Dimensions(String),

    #[error("dimension mismatch: {0}")]
    Mismatch(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("enumeration too large: C({n}, {k}) exceeds {limit}")]
    ScaleGuard { n: usize, k: usize, limit: u64 },

    #[error("solver did not converge after {iterations} iterations (best residual {residual:.6e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("infeasible problem: {0}")]
    Infeasible(String),

    #[error("perfect reconstruction: error norm is zero")]
    PerfectReconstruction,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed matrix file: {0}")]
    Format(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Usage and validation failures, as opposed to numerical or runtime ones.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Dimensions(_)
                | Error::Mismatch(_)
                | Error::Parameter(_)
                | Error::Schema(_)
                | Error::Config(_)
                | Error::Format(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
