use thiserror::Error;

use crate::grmat::Degree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime field order up to 65536")]
    NotPrime(u64),

    #[error("column {column} references row {row}, but there are only {rows} rows")]
    RowOutOfRange { column: usize, row: usize, rows: usize },

    #[error(
        "entry ({row}, {column}) is inhomogeneous: row degree {row_degree} is not below column degree {col_degree}"
    )]
    Inhomogeneous { row: usize, column: usize, row_degree: Degree, col_degree: Degree },

    #[error("presentation is not generated at a single degree")]
    NotUniquelyGenerated,

    #[error("{given} basis vectors span only a {rank}-dimensional space")]
    DegenerateBasis { given: usize, rank: usize },

    #[error("{lower} is not below {upper}")]
    NotBelow { lower: Degree, upper: Degree },

    #[error("the module vanishes at {0}")]
    ZeroModule(Degree),

    #[error("the module has unbounded support")]
    Unbounded,

    #[error("integration bound {bound} lies below the degree {degree}")]
    BoundTooSmall { bound: Degree, degree: Degree },

    #[error("factor lists are based at different degrees {0} and {1}")]
    MismatchedBase(Degree, Degree),

    #[error("{0} is not a point of the grid")]
    OffGrid(Degree),

    #[error("randomized shrunk-subspace search at {alpha} failed after {attempts} attempts")]
    ChengFailed { alpha: Degree, attempts: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}
