//! Sparse multivariate polynomials and rational functions with exact
//! identity testing.

mod chart;
mod ratfunc;
mod sparse;

pub use chart::{chart_restrict, Chart, ChartRelation};
pub use ratfunc::{ratfunc_equal, RatFunc};
pub use sparse::{Exponents, SparsePoly};

use alloc::string::String;

use crate::field::FieldError;

/// Resource limits for expansion-heavy operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of terms any intermediate polynomial may reach.
    pub term_budget: usize,
}

impl Limits {
    pub const DEFAULT_TERM_BUDGET: usize = 1_000_000;

    pub fn unbounded() -> Self {
        Limits { term_budget: usize::MAX }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits { term_budget: Self::DEFAULT_TERM_BUDGET }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("term budget exceeded: {terms} terms > {budget}")]
    Budget { terms: usize, budget: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("composition has an identically zero denominator")]
    DegenerateComposition,
    #[error("evaluation at a pole")]
    Pole,
    #[error("unsupported relation: {0}")]
    UnsupportedRelation(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}
