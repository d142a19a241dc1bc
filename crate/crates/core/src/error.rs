use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: {0}")]
    Pole(String),
    #[error("pole of order {order} at {at}; only simple poles are supported")]
    HigherOrderPole { order: i64, at: String },
    #[error("degenerate weight configuration: {0}")]
    Degenerate(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;
