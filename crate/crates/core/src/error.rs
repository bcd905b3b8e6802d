use thiserror::Error;

use crate::graph::Subset;
use crate::lp::SolverError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty subset has no density")]
    EmptySubset,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A per-color demand exceeds the number of nodes carrying that color.
    #[error("demand for color `{color}` is {demand} but only {available} nodes carry it")]
    InfeasibleDemand {
        color: String,
        demand: usize,
        available: usize,
    },

    /// Diversify ran out of nodes before reaching the target ratio. Carries
    /// the largest set it reached.
    #[error("no superset of the input reaches the diversity target")]
    InfeasibleExtension { reached: Subset },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("instance too large for {what}: {size} > {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error(transparent)]
    Solver(#[from] SolverError),
}

pub type Result<T> = std::result::Result<T, Error>;
