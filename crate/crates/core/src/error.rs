use crate::format::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("alphabet mismatch between `{left}` and `{right}`")]
    AlphabetMismatch { left: String, right: String },
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("supervisor `{name}` is not feasible: {reason}")]
    Infeasible { name: String, reason: String },
    #[error("malformed cover: {0}")]
    MalformedCover(String),
    #[error("not a control cover: {0}")]
    InvalidCover(String),
    #[error("exact search is capped at {cap} states, supervisor has {states}")]
    CapExceeded { states: usize, cap: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
}
