use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid index {0}: indices start at 1")]
    InvalidIndex(u64),

    #[error("leading index is undefined for the zero element")]
    ZeroElement,

    #[error("index arithmetic overflowed")]
    IndexOverflow,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no bound given for weight {0}")]
    MissingBound(String),

    #[error("no tolerance given for weight {0}")]
    MissingEps(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("window is empty")]
    EmptyWindow,

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    /// A search ran out of candidates inside its window. Not a failure of
    /// the property being checked.
    #[error("refused: {0}")]
    Refusal(String),
}
