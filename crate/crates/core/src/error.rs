use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested body or value is unbounded.
    #[error("unbounded result")]
    Unbounded,
    /// A linear program has no feasible point.
    #[error("linear program is infeasible")]
    Infeasible,
    /// A linear program has an unbounded objective.
    #[error("linear program is unbounded")]
    UnboundedObjective,
    /// No exact path exists for this input (e.g. a polygon in d >= 3).
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A numerical routine failed to converge.
    #[error("internal numerical failure: {0}")]
    Numerical(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
