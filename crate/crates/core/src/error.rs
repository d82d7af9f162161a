use thiserror::Error;

/// Errors raised by the solvers, generators and file parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("digraph has a directed cycle: {witness:?}")]
    Cyclic { witness: Vec<usize> },

    #[error("ordering is not a permutation of the {expected} vertices")]
    LengthMismatch { expected: usize },

    #[error("no winning strategy with {k} cops")]
    NotWinnable { k: usize },

    #[error("search budget of {budget} exceeded")]
    Budget { budget: usize },

    #[error("instance with {n} vertices exceeds the oracle cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("ordering is not a round ordering")]
    NotRound,

    #[error("digraph is not a tournament")]
    NotTournament,

    #[error("the supplied set is not a feedback vertex set")]
    NotFvs,

    #[error("matrix dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid 3-partition instance: {0}")]
    InvalidInstance(String),

    #[error("not a valid 3-partition: {0}")]
    NotAPartition(String),

    #[error("vertex {vertex} has out-degree zero")]
    HasSink { vertex: usize },

    #[error("strategy is not winning")]
    NotWinning,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: vertex {index} out of range for {n} vertices")]
    IndexOutOfRange { line: usize, index: usize, n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
