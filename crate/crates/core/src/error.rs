use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("invalid node label {0:?}: labels must be non-empty")]
    BadLabel(String),
    #[error("edge {from:?} -> {to:?} has weight 0; weights must be positive")]
    BadWeight { from: String, to: String },
    #[error("graph is already undirected")]
    NoOp,
    #[error("node {0:?} is not in the graph")]
    NodeNotFound(String),
    #[error("partition does not match graph: {0}")]
    PartitionMismatch(String),
    #[error("no candidate partitions to choose from")]
    NoCandidates,
    #[error("louvain works on undirected graphs only; convert with to_undirected first")]
    DirectedInput,
    #[error("this operation needs a directed graph")]
    UndirectedInput,
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: invalid timestamp {value:?} (expected YYYY-MM-DDTHH:MM:SS)")]
    Timestamp { line: u64, value: String },
    #[error("unknown format {0:?}")]
    Format(String),
    #[error("invalid synthetic config: {0}")]
    Config(String),
}

impl Error {
    /// True for malformed input (files, labels, configs, format names), as
    /// opposed to a well-formed input that violates an algorithm contract.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::BadLabel(_)
                | Error::BadWeight { .. }
                | Error::Parse { .. }
                | Error::Timestamp { .. }
                | Error::Format(_)
                | Error::Config(_)
        )
    }
}
