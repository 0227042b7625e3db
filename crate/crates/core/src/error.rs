use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A caller supplied a value outside an operation's contract.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// An element was used with a field or valuation it does not belong to.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured cap (iterate degree, factoring degree, orbit length) was hit.
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A proven identity failed to hold; always an implementation bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub fn parse(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: msg.into(),
        }
    }
}
