use thiserror::Error;

/// Errors produced by the numerical kernels, the geometry layer and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("network contains no base stations")]
    EmptyNetwork,

    #[error("no base station within the cluster radius")]
    EmptyCluster,

    #[error("degenerate channel: zero-forcing projection of the direct channel vanishes")]
    DegenerateChannel,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{operation}: numerical failure (achieved abs error {achieved:.3e}, requested {requested:.3e})")]
    NumericalFailure {
        operation: &'static str,
        achieved: f64,
        requested: f64,
    },

    #[error("hypergeometric parameters are degenerate for the requested transformation: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Attach the name of the failing operation to a numerical failure coming from a lower layer.
    pub(crate) fn in_operation(self, operation: &'static str) -> Self {
        match self {
            Error::NumericalFailure {
                achieved, requested, ..
            } => Error::NumericalFailure {
                operation,
                achieved,
                requested,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
