use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("not h-regular at arc {0}")]
    NotRegular(usize),
    #[error("infeasible flow: {0}")]
    Infeasible(String),
    #[error("graph is not acyclic")]
    Cyclic,
    #[error("oracle budget exceeded: {0}")]
    Budget(String),
    #[error("certificate check failed: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
