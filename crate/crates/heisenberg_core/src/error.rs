use thiserror::Error;

use crate::point::HPoint;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {point} lies outside the domain of `{field}` ({domain})")]
    OutOfDomain { field: String, domain: String, point: HPoint },
    #[error("jet of order {have} is too short, need order {need}")]
    JetExhausted { have: usize, need: usize },
    #[error("singular {what} at {point}")]
    Singular { what: &'static str, point: HPoint },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
