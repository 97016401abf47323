use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("pairing is degenerate or not well defined")]
    DegeneratePairing,
    #[error("group order {order} exceeds the bound {bound}")]
    OrderExceedsBound { order: u64, bound: u64 },
    #[error("no catalog entry matches the pairing")]
    NoCatalogMatch,
    #[error("group rank {rank} exceeds matrix size {n}")]
    RankExceedsN { rank: usize, n: usize },
    #[error("invalid invariant factors: {0}")]
    InvalidGroup(&'static str),
    #[error("expected a {expected} prime, got {got}")]
    WrongPrime { expected: &'static str, got: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("cannot parse pairing class: {0}")]
    ParseClass(alloc::string::String),
    #[error("search space too large: {0}")]
    SearchTooLarge(&'static str),
}
