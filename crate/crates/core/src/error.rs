use thiserror::Error;

use crate::model::{Label, Point};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point {point} is outside the domain of size {size}")]
    Domain { point: Point, size: u32 },

    #[error("label {label} is outside the alphabet of size {labels}")]
    LabelOverflow { label: Label, labels: u32 },

    #[error("representation error: {0}")]
    Representation(String),

    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("input {points:?} is shattered; no excluded output exists")]
    Shattered { points: Vec<Point> },

    #[error("witness output {points:?} is realized by the checked class")]
    ExclusionViolated { points: Vec<Point> },

    #[error("no mixture reached expected risk 1/4 after {examined} candidates")]
    NflFailure { examined: usize },

    #[error("enumeration budget of {budget} hypotheses exhausted")]
    Budget { budget: usize },

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
