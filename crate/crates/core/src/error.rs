use thiserror::Error;

use crate::graph::Certificate;

/// Everything that can go wrong in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point set must have positive dimension")]
    ZeroDimension,
    #[error("point {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("points {0} and {1} coincide within tolerance")]
    DuplicatePoint(usize, usize),
    #[error("degenerate angle: an arm coincides with the vertex")]
    DegenerateAngle,
    #[error("degenerate pair: the two points coincide")]
    DegeneratePair,
    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("dimension {0} is too large (limit {1})")]
    DimensionTooLarge(usize, usize),
    #[error("input points are not pairwise acute")]
    NotAcute,
    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("construction infeasible in part {part} at step {step}: {reason}")]
    FeasibilityFailure {
        part: usize,
        step: u8,
        reason: String,
    },
    #[error("verification failed with {} violating pairs", .0.violations.len())]
    VerificationFailure(Certificate),
    #[error("partition does not match the graph: {0}")]
    PartitionMismatch(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
