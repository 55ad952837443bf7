use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Parameters that can never describe a valid run (bad p, overflow-scale n, infeasible sizes).
    #[error("configuration error: {0}")]
    Config(String),
    /// Inputs outside an operation's domain (empty graph, u == v, adjacent pins, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Preconditions on part sizes or partition shape.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Exponential oracles refuse instances above their size guard.
    #[error("instance too large for exact search: {0}")]
    Size(String),
    /// A runtime assertion from the construction's counting arguments failed.
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
