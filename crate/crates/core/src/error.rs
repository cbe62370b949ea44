use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("singular matrix: pivot {pivot:.3e} below tolerance {tolerance:.3e}")]
    SingularMatrix { pivot: f64, tolerance: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge: best value {value}, error estimate {abs_error:.3e}")]
    QuadratureNotConverged { value: f64, abs_error: f64 },

    #[error("degenerate subset {subset:?}: {reason}")]
    Degenerate { subset: Vec<usize>, reason: String },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("trial {index} failed: {source}")]
    Trial {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
