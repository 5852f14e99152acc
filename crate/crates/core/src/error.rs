use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cover degree must be at least 2, got {0}")]
    InvalidDegree(String),
    #[error("monodromy entry {index} is zero mod {k}: a cover needs exactly three branch points")]
    ZeroMonodromy { index: usize, k: String },
    #[error("monodromies sum to {sum} mod {k}, expected 0")]
    SumNotZero { sum: String, k: String },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("argument outside the domain of {op}: {detail}")]
    DomainError { op: &'static str, detail: String },
    #[error("(g, n) = ({g}, {n}) is unstable: 2g - 2 + n must be positive")]
    UnstablePair { g: u32, n: u32 },
    #[error("no base case for genus {0}")]
    NoBaseCase(u32),
    #[error("invalid stable graph: {0}")]
    InvalidGraph(String),
    #[error("invalid set partition: {0}")]
    InvalidPartition(String),
    #[error("cycle arity {found} does not match expected arity {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("point symbols must be pairwise distinct")]
    DuplicateSymbols,
    #[error("size {size} exceeds the limit {limit}")]
    LimitExceeded { size: usize, limit: usize },
    #[error("invalid group data: {0}")]
    InvalidGroup(String),
}
