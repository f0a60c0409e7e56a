use thiserror::Error;

use crate::hring::HPolynomial;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("level k must be positive, got {0}")]
    InvalidLevel(usize),

    #[error("parts {0:?} are not weakly decreasing")]
    NotAPartition(Vec<usize>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cell ({row},{col}) is outside {shape}")]
    CellOutside { row: usize, col: usize, shape: String },

    #[error("{shape} is not {k}-bounded")]
    NotBounded { shape: String, k: usize },

    #[error("{shape} is not a {m}-core", m = .k + 1)]
    NotACore { shape: String, k: usize },

    #[error("generator h_{r} is outside the ring truncated at k={k}")]
    GeneratorOutOfRange { r: i64, k: usize },

    #[error("polynomial is not divisible; remainder has {} term(s)", .0.len())]
    NotDivisible(HPolynomial),

    #[error("divisor must have a unit leading coefficient")]
    UnitLeadingCoefficientRequired,

    #[error("division by zero polynomial")]
    DivisionByZero,

    #[error("expansion solve failed: {0}")]
    SolveFailure(String),

    #[error("size budget exceeded: needs {needed}, budget is {budget}")]
    BudgetExceeded { needed: usize, budget: usize },

    #[error("instance violates hypothesis: {0}")]
    Hypothesis(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
