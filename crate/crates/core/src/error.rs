use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("size mismatch: grid has {expected} points, got {got} values")]
    SizeMismatch { expected: usize, got: usize },
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error(
        "derivative order {order} exceeds the configured maximum {max}; \
         (i xi)^j amplifies round-off like xi^j, so higher orders are noise dominated"
    )]
    DerivativeOrder { order: usize, max: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("field is identically zero")]
    ZeroField,
}

pub type Result<T> = std::result::Result<T, Error>;
