//! Fixed-scale cover experiments on balls in Cayley graphs.
//!
//! Everything here works at one scale `D` with one diameter bound `B`. A valid
//! witness is a fixed-scale witness only, never an asymptotic-dimension value.

mod cover;
mod search;
mod space;
mod witness;

use thiserror::Error;

pub use cover::{brick_cover, brick_side, verify_cover, CoverReport, CoverWitness, Violation};
pub use search::{min_families_exhaustive, SearchOutcome, MAX_SEARCH_FAMILIES, MAX_SEARCH_POINTS};
pub use space::{
    cayley_ball, FiniteMetricSpace, GroupSpec, DEFAULT_POINT_BUDGET, MATRIX_POINT_CAP,
};
pub use witness::{read_witness, write_witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("point budget exceeded: {what} needs more than {budget} points")]
    BudgetExceeded { what: String, budget: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not a metric: {0}")]
    NotAMetric(String),
    #[error("witness line {line}: {message}")]
    Witness { line: usize, message: String },
}
