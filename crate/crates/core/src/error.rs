use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two nodes of a modeled link share a position.
    #[error("coincident nodes on link {from} -> {to}")]
    Geometry { from: String, to: String },

    #[error("invalid value for `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("argument {arg} outside the domain of {function}")]
    Domain { function: &'static str, arg: f64 },

    /// Adaptive quadrature ran out of subdivisions; `estimate` is the best
    /// value reached and `error` its estimated absolute error.
    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate:e}, error {error:e})")]
    Quadrature {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    /// Exact power-set enumeration refused; use the Monte Carlo engine.
    #[error("{pairs} D2D pairs exceed the exact-evaluation limit of {limit}; use the Monte Carlo engine instead")]
    CapacityGuard { pairs: usize, limit: usize },

    #[error("unsupported moment order {0}")]
    UnsupportedOrder(u32),

    #[error("unknown probe quantity `{0}`")]
    UnknownProbe(String),

    /// Every candidate has a zero utility, so the fair function is undefined.
    #[error("no candidate with positive utilities: {0}")]
    ZeroUtility(String),

    #[error("scenario: {0}")]
    Scenario(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
