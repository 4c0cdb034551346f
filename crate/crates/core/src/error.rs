use thiserror::Error;

/// Errors raised by model evaluation, transforms, inversion and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Argument outside the region where a transform or exponent converges.
    #[error("{what}: argument {arg} outside the convergence region ({boundary})")]
    Domain {
        what: String,
        arg: String,
        boundary: String,
    },

    /// The requested quantity does not exist for this model class.
    #[error("unsupported regime: {0}")]
    Regime(String),

    /// A moment of the claim law needed by the formula is infinite.
    #[error("unsupported moment: {0}")]
    UnsupportedMoment(String),

    #[error("root solver did not converge after {iterations} iterations; last bracket [{lo}, {hi}]")]
    NoConvergence { iterations: usize, lo: f64, hi: f64 },

    #[error("quadrature did not reach the requested tolerance: {0}")]
    Quadrature(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("empty sample")]
    EmptySample,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(what: impl Into<String>, arg: impl ToString, boundary: impl Into<String>) -> Self {
        Error::Domain {
            what: what.into(),
            arg: arg.to_string(),
            boundary: boundary.into(),
        }
    }
}
