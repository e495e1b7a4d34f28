use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("invalid cluster: regions {first} and {second} overlap by area {area:e}")]
    Overlap {
        first: usize,
        second: usize,
        area: f64,
    },

    #[error("malformed boundary mesh: {0}")]
    MalformedMesh(String),

    #[error("boundary is empty")]
    EmptyBoundary,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported representation: {0}")]
    Unsupported(String),

    /// The area sequence violates `sum sqrt(a_k) < inf`.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("insufficient depth: {0}")]
    InsufficientDepth(String),

    #[error("cantor schedule is not fat: {0}")]
    NotFat(String),

    #[error("divergent functional: {0}")]
    Divergent(String),

    #[error("manifest replay mismatch: {0}")]
    ReplayMismatch(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("{}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for errors caused by the caller's input rather than by the program.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Io { .. } | Error::ReplayMismatch(_))
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
