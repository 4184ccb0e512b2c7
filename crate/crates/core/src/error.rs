use thiserror::Error;

/// Errors produced by graph construction, walk evaluation and planning.
#[derive(Debug, Error, PartialEq)]
pub enum Error {
    #[error("vertex {0} has non-positive weight")]
    NonPositiveWeight(String),
    #[error("edge {0}-{1} has non-positive length")]
    NonPositiveLength(String, String),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(String),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is disconnected: vertex {0} unreachable")]
    DisconnectedGraph(String),
    #[error("unknown vertex id {0}")]
    UnknownVertex(String),
    #[error("weight {0} outside (0, 1]")]
    OutOfRange(f64),
    #[error("walk is empty")]
    EmptyWalk,
    #[error("vertex {0} never visited by the kernel")]
    VertexNeverVisited(String),
    #[error("block count {count} is not a multiple of 2^{class} required by class {class}")]
    MisalignedBlockCount { count: usize, class: usize },
    #[error("vertex set is empty")]
    EmptySet,
    #[error("start vertex not in the given set")]
    StartNotInSet,
    #[error("{0} vertices exceed the exact solver limit of {1}")]
    TooLarge(usize, usize),
    #[error("search space too large: n={n}, kernel cap={cap}")]
    SearchSpaceTooLarge { n: usize, cap: usize },
    #[error("bad generator parameter: {0}")]
    BadParam(String),
    #[error("too many low-weight vertices for the available blocks ({low} vs {blocks})")]
    TooManySmallWeights { low: usize, blocks: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
