use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("n must be at least 2, got {0}")]
    NBelowTwo(usize),
    #[error("attachment set is empty: s_n would be isolated")]
    EmptyAttach,
    #[error("attachment vertex {vertex} outside [1, {max}]")]
    AttachOutOfRange { vertex: i64, max: usize },
    #[error("vertex {vertex} outside [1, {n}]")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("illegal move: vertex {0} is white")]
    IllegalMove(usize),
    #[error("configuration has length {got}, expected {expected}")]
    ConfigLength { got: usize, expected: usize },
    #[error("malformed configuration {0:?}: expected a bitstring of 0/1")]
    ConfigParse(String),
    #[error("malformed graph spec {0:?}")]
    GraphParse(String),
    #[error("n = {n} exceeds the oracle cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("group closure exceeded {0} elements")]
    GroupCapExceeded(usize),
    #[error("internal rank error: simple basis has rank {rank} < {n}")]
    InternalRankError { rank: usize, n: usize },
}

impl Error {
    /// Stable machine-readable name, used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NBelowTwo(_) => "NBelowTwo",
            Error::EmptyAttach => "EmptyAttach",
            Error::AttachOutOfRange { .. } => "AttachOutOfRange",
            Error::VertexOutOfRange { .. } => "VertexOutOfRange",
            Error::IllegalMove(_) => "IllegalMove",
            Error::ConfigLength { .. } => "ConfigLength",
            Error::ConfigParse(_) => "ConfigParse",
            Error::GraphParse(_) => "GraphParse",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::GroupCapExceeded(_) => "GroupCapExceeded",
            Error::InternalRankError { .. } => "InternalRankError",
        }
    }

    /// True for errors caused by an invalid graph description.
    pub fn is_graph_error(&self) -> bool {
        matches!(
            self,
            Error::NBelowTwo(_) | Error::EmptyAttach | Error::AttachOutOfRange { .. } | Error::GraphParse(_)
        )
    }
}
