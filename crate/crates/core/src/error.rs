use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Variants fall into three groups, see [`Error::kind`]: bad input,
/// violated preconditions, and internal assertions that would contradict a
/// proven statement (those signal a bug, never a bad lattice).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("gram matrix is not symmetric: entry ({row},{col}) differs from ({col},{row})")]
    NotSymmetric { row: usize, col: usize },
    #[error("gram matrix is not positive definite: leading minor of order {order} is not positive")]
    NotPositiveDefinite { order: usize },
    #[error("gram matrix is not integral: entry ({row},{col}) = {value}")]
    NotIntegral { row: usize, col: usize, value: String },
    #[error("gram matrix must be square and non-empty ({0})")]
    NotSquare(String),
    #[error("requested norm {0} is negative")]
    NormNegative(String),
    #[error("vector is not in the dual lattice")]
    NotInDual,
    #[error("vector has {got} coordinates, lattice has rank {rank}")]
    DimensionMismatch { rank: usize, got: usize },
    #[error("rank {rank} exceeds the configured bound {bound} for isometry counting")]
    RankBoundExceeded { rank: usize, bound: usize },
    #[error("generators do not span the full ambient space (rank {rank} < {dim})")]
    RankDeficient { rank: usize, dim: usize },

    #[error("codeword has length {got}, code length is {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("code dimension {0} exceeds the enumeration limit of 20")]
    DimensionTooLarge(usize),
    #[error("code has length {got}, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("code length {0} is out of range (1..=64)")]
    BadCodeLength(usize),
    #[error("code is not doubly even")]
    NotDoublyEven,
    #[error("sign pattern has length {got}, code length is {expected}")]
    SignLength { expected: usize, got: usize },

    #[error("lattice is not even")]
    NotEven,
    #[error("lattice is not odd")]
    NotOdd,
    #[error("lattice is not unimodular (determinant {0})")]
    NotUnimodular(String),
    #[error("coset is not in R_L")]
    CosetNotInR,
    #[error("lattice satisfies one of the twisted conditions; P_L is not defined")]
    ConditionAbc,

    #[error("internal: coset has {count} norm-2 vectors, bound is {bound} (excess must be zero)")]
    EqualityViolated { count: usize, bound: usize },
    #[error("internal: orthogonal frame stopped after {found} of {rank} vectors")]
    Incomplete { found: usize, rank: usize },
    #[error("internal: no sign pattern rebuilds the lattice")]
    NoSignPattern,
    #[error("internal: |P_L| = {0} is not a power of two")]
    NotPowerOfTwo(u64),
    #[error("internal: {0}")]
    CrossCheck(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("{0}")]
    Input(String),
}

/// Coarse classification used for CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Precondition,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            EqualityViolated { .. }
            | Incomplete { .. }
            | NoSignPattern
            | NotPowerOfTwo(_)
            | CrossCheck(_) => ErrorKind::Internal,
            NotSymmetric { .. }
            | NotPositiveDefinite { .. }
            | NotIntegral { .. }
            | NotSquare(_)
            | Parse { .. }
            | UnknownName(_)
            | Input(_)
            | LengthMismatch { .. }
            | BadCodeLength(_)
            | DimensionMismatch { .. } => ErrorKind::Input,
            _ => ErrorKind::Precondition,
        }
    }
}
