use thiserror::Error;

/// Errors raised by the library.
///
/// Arithmetic bugs (a division that should have been exact but was not, an
/// alternant ratio that failed to be a rational integer) are reported through
/// the same type so callers can surface them, but they indicate a defect rather
/// than bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("conductor must be positive")]
    ZeroConductor,

    #[error("{what} must be at least {min}, got {got}")]
    TooSmall {
        what: &'static str,
        min: u64,
        got: u64,
    },

    #[error("partition length {length} exceeds the number of variables {degree}")]
    LengthExceedsDegree { length: usize, degree: usize },

    #[error("composition has {got} entries, expected {expected}")]
    CompositionLength { expected: usize, got: usize },

    #[error("not a partition: parts must be weakly decreasing, got {0:?}")]
    NotAPartition(Vec<usize>),

    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u64, u64),

    #[error("polynomial division left a nonzero remainder")]
    InexactDivision,

    #[error("power series inverse needs constant term +1 or -1")]
    NonUnitConstantTerm,

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector system contains a zero vector at index {0}")]
    ZeroVector(usize),

    #[error("vector system spans a subspace of dimension {rank}, ambient dimension is {dim}")]
    NotSpanning { rank: usize, dim: usize },

    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} has more than two distinct odd prime factors")]
    TooManyOddPrimes(u64),

    #[error("arc endpoint {0:?} is not a vertex")]
    UnknownVertex(String),

    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),

    #[error("tree arcs do not form a spanning tree: {0}")]
    NotATree(String),

    #[error("alternant ratio is not a rational integer (n = {n}, lambda = {lambda:?})")]
    NonIntegralRatio { n: u64, lambda: Vec<usize> },

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
}

pub type Result<T> = std::result::Result<T, Error>;
