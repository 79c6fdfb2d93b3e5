use thiserror::Error;

pub type Result<T> = std::result::Result<T, GofError>;

#[derive(Debug, Error)]
pub enum GofError {
    /// Invalid distribution or model parameters (e.g. `sigma <= 0`).
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed or inconsistent input data.
    #[error("invalid input: {0}")]
    Input(String),
    /// The sample puts the argmax location on the boundary of `[0, 1]`.
    /// Happens with probability zero under a continuous hypothesis.
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    /// The requested statistic/method combination is not available.
    #[error("unsupported: {0}")]
    Capability(String),
    #[error("series did not converge after {terms} terms (last term {last_term:e}, tolerance {tolerance:e})")]
    Convergence {
        terms: usize,
        last_term: f64,
        tolerance: f64,
    },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl GofError {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        GofError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
