use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("invalid graphon: {0}")]
    InvalidGraphon(String),

    #[error("graphon values are not symmetric: |w[{i}][{j}] - w[{j}][{i}]| = {diff:e}")]
    Asymmetric { i: usize, j: usize, diff: f64 },

    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),

    #[error("invalid cdf: {0}")]
    InvalidCdf(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{what} refused: size {size} exceeds limit {limit}")]
    CostGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("boundary is not consistent: {0}")]
    NotConsistent(String),

    #[error("point {0} lies outside the materialized embedding")]
    OutOfRange(f64),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn guard(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(Error::CostGuard { what, size, limit })
    } else {
        Ok(())
    }
}
