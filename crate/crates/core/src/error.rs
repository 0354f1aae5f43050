use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("loop edge at vertex {0:?} (x ~ y requires x != y)")]
    LoopEdge(String),
    #[error("duplicate edge {0}")]
    DuplicateEdge(String),
    #[error("translation vector {edge} has length {got}, graph rank is {rank}")]
    RankMismatch { edge: String, got: usize, rank: usize },
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("edge {0} carries no orientation tag")]
    UnorientedEdge(String),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("eigensolver failure: {0}")]
    Eigensolver(String),
    #[error("THEOREM-INCONSISTENCY: {0}")]
    TheoremInconsistency(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code used by the CLI report and exit status.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io_error",
            Error::Parse(_) => "parse_error",
            Error::LoopEdge(_) => "loop_edge",
            Error::DuplicateEdge(_) => "duplicate_edge",
            Error::RankMismatch { .. } => "rank_mismatch",
            Error::UnknownVertex(_) => "unknown_vertex",
            Error::UnorientedEdge(_) => "unoriented_edge",
            Error::InvalidGroup(_) => "invalid_group",
            Error::Precondition(_) => "precondition_failed",
            Error::Config(_) => "invalid_config",
            Error::Eigensolver(_) => "eigensolver_failure",
            Error::TheoremInconsistency(_) => "theorem_inconsistency",
            Error::Internal(_) => "internal_error",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 3,
            Error::Parse(_) => 4,
            Error::LoopEdge(_)
            | Error::DuplicateEdge(_)
            | Error::RankMismatch { .. }
            | Error::UnknownVertex(_)
            | Error::UnorientedEdge(_)
            | Error::InvalidGroup(_) => 5,
            Error::Precondition(_) => 6,
            Error::Config(_) => 7,
            Error::Eigensolver(_) => 8,
            Error::TheoremInconsistency(_) => 9,
            Error::Internal(_) => 10,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
