use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    /// An iterate left the ellipticity cone. `point` is the flat grid index
    /// (absent for single-matrix queries), `order` the first `j` with
    /// `sigma_j <= 0` and `value` that `sigma_j`.
    #[error("not admissible{}: sigma_{order} = {value:e}", .point.map(|i| format!(" at point {i}")).unwrap_or_default())]
    NotAdmissible {
        point: Option<usize>,
        order: usize,
        value: f64,
    },

    #[error("Newton did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("continuation stalled at t = {t_reached}")]
    ContinuationStalled { t_reached: f64 },

    #[error("fixed-point iteration stalled after {iterations} iterations (gap {gap:e})")]
    FixedPointStalled { iterations: usize, gap: f64 },

    #[error("Harnack condition infeasible: lambda_max * D^2 = {product} >= pi^2/2")]
    HarnackInfeasible { product: f64 },

    #[error("io: {0}")]
    Io(String),

    #[error("format: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Attaches a grid index to a pointwise admissibility failure.
    pub(crate) fn at_point(self, index: usize) -> Self {
        match self {
            Error::NotAdmissible { order, value, .. } => Error::NotAdmissible {
                point: Some(index),
                order,
                value,
            },
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
