use thiserror::Error;

use crate::numerics::IntegralResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    /// Adaptive quadrature ran out of subdivisions. The partial value is kept
    /// so callers can decide whether it is still usable.
    #[error("quadrature failure in {context}: error estimate {} after exhausting subdivisions (partial value {})", .partial.error_estimate, .partial.value)]
    Quadrature {
        context: String,
        partial: IntegralResult,
    },

    /// The cone apex has no image in the cusp strip (it sits at y = infinity).
    #[error("the cone apex maps to y = infinity")]
    ApexAtInfinity,

    #[error("invalid surface data: {0}")]
    InvalidSurface(String),

    /// Reading or writing a named file failed.
    #[error("{}: {source}", .path.display())]
    File {
        path: std::path::PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            op,
            reason: reason.into(),
        }
    }

    /// Adapter for `map_err` that attaches the file name to an I/O error.
    pub(crate) fn file(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> Self + '_ {
        move |source| Error::File {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Prefix a quadrature failure with additional context; other errors pass
    /// through untouched.
    pub fn with_context(self, ctx: impl std::fmt::Display) -> Self {
        match self {
            Error::Quadrature { context, partial } => Error::Quadrature {
                context: format!("{ctx}: {context}"),
                partial,
            },
            other => other,
        }
    }

    pub fn is_quadrature_failure(&self) -> bool {
        matches!(self, Error::Quadrature { .. })
    }
}
