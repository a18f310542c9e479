use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("source and sink must be distinct vertices")]
    SourceEqualsSink,
    #[error("vertex {0} is out of range")]
    InvalidVertex(usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("unknown edge id {0}")]
    UnknownEdge(usize),
    #[error("edge capacities must be positive")]
    ZeroCapacity,
    #[error("self-loops are not allowed")]
    SelfLoop,
    #[error("cut side must not be empty")]
    EmptySide,
    #[error("cut side must not contain every vertex")]
    FullSide,
    #[error("contraction would merge source and sink")]
    SourceSinkMerged,
    #[error("flow is infeasible: {0}")]
    InfeasibleFlow(String),
    #[error("arcs do not chain into a path")]
    NotAPath,
    #[error("no flow-carrying (t,s)-path through the requested edge")]
    NoCarrierPath,
    #[error("graph too large for exhaustive enumeration (n = {0}, limit {1})")]
    TooLarge(usize, usize),
    #[error("every (s,t)-cut already has minimum capacity")]
    NoSecondMincut,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("operation requires a directed graph")]
    DirectedRequired,
    #[error("operation requires an undirected graph")]
    UndirectedRequired,
    #[error("operation requires unit edge capacities")]
    UnitCapacityRequired,
    #[error("operation requires a simple graph (undirected, unit capacities, no parallel edges)")]
    SimpleGraphRequired,
    #[error("mixed failure/insertion pairs are only supported by the baseline oracle")]
    MixedPairUnsupported,
}

pub type Result<T> = std::result::Result<T, Error>;
