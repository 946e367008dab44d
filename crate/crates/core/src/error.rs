use alloc::string::String;

/// Errors produced by the simulator and the algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("capacity exceeded: {requested} qubits requested, limit is {limit}")]
    Capacity { requested: usize, limit: usize },
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    Bounds { index: usize, n_qubits: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("matrix is not hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("measurement outcome has zero probability")]
    ImpossibleOutcome,
    #[error("{a} has no inverse modulo {n}")]
    NotInvertible { a: u64, n: u64 },
    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("promise violated: {0}")]
    Promise(String),
    #[error("matrix is ill-conditioned (condition estimate {0:e})")]
    Conditioning(f64),
    #[error("post-selected state has vanishing norm")]
    NullResult,
    #[error("out of range: {0}")]
    Range(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = core::result::Result<T, Error>;
