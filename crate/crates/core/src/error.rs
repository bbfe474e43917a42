use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitRange { n: usize, min: usize, max: usize },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid field specification: {0}")]
    InvalidField(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("generators are linearly dependent (rank {rank} < {expected})")]
    DependentGenerators { rank: usize, expected: usize },

    #[error("epsilon {epsilon} outside valid range ({range})")]
    EpsilonRange { epsilon: f64, range: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("outcome label {label} outside the {count} available outcomes")]
    UnknownOutcome { label: usize, count: usize },

    #[error("missing eigenvalue estimates for {0} Pauli operators")]
    MissingEstimates(usize),

    #[error("non-finite input at position {0}")]
    NonFinite(usize),

    #[error("bound violated: {0}")]
    BoundViolated(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
