use thiserror::Error;

use crate::partition::Partition;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alpha must be positive, got {0}")]
    NonPositiveAlpha(String),

    #[error(
        "alpha must be at least 1 for the partition chains, got {0}; \
         use alpha' = 1/alpha together with conjugate partitions instead"
    )]
    AlphaBelowOne(String),

    #[error("cell ({row}, {col}) is not in the diagram of {partition}")]
    InvalidCell {
        partition: Partition,
        row: usize,
        col: usize,
    },

    #[error("partitions {0} and {1} have different sizes")]
    SizeMismatch(Partition, Partition),

    #[error("{inner} is not obtained from {outer} by removing a single box")]
    NotSingleBoxSkew { outer: Partition, inner: Partition },

    #[error("power-sum expressions of degrees {0} and {1} cannot be paired")]
    DegreeMismatch(usize, usize),

    #[error("degree must be at least {min}, got {n}")]
    DegreeTooSmall { n: usize, min: usize },

    #[error("degree {n} exceeds the limit {max} for this computation")]
    DegreeTooLarge { n: usize, max: usize },

    #[error("invalid partition text {0:?}")]
    ParsePartition(String),

    #[error("invalid rational text {0:?}")]
    ParseScalar(String),

    #[error("theta table for degree {expected} and alpha {alpha} is required, got degree {got}")]
    ThetaMismatch {
        expected: usize,
        got: usize,
        alpha: String,
    },

    #[error("singular matrix in exact elimination")]
    Singular,

    #[error("zero self inner product while orthogonalizing at {0}")]
    DegenerateGramSchmidt(Partition),

    #[error("input must be finite, got {0}")]
    NonFinite(f64),

    #[error("malformed table: {0}")]
    MalformedTable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
