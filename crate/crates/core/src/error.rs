use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("size mismatch: expected {expected} values, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("operands belong to different contexts")]
    ContextMismatch,

    #[error("field has zero norm")]
    NonPositiveNorm,

    #[error("too close to the endpoint: gap {gap} is below the guard {guard}")]
    EndpointProximity { gap: f64, guard: f64 },

    #[error("field is not CR-pluriharmonic: coefficient at bidegree ({j},{k}) is nonzero")]
    NotPluriharmonic { j: usize, k: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T: crate::Real>(what: &'static str, value: T) -> Error {
    Error::Domain {
        what,
        value: value.to_f64_lossy(),
    }
}
