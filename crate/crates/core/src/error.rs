//! Crate-wide error type.

/// Errors raised by parameter validation, grid construction and evaluation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Violation of the admissible parameter ranges; the message names the bound.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Undefined exponent arithmetic (inf - inf, 0 * inf, division by zero).
    #[error("exponent arithmetic error: {0}")]
    Exponent(String),
    /// An exponent equation has no admissible solution.
    #[error("no solution: {0}")]
    NoSolution(String),
    /// A Lorentz spec is not equivalent to a rearrangement-invariant space.
    #[error("non-normable Lorentz spec: {0}")]
    NonNormable(String),
    /// Grid construction failed (empty range or size cap exceeded).
    #[error("grid error: {0}")]
    Grid(String),
    /// A power-weight integral diverges at the origin.
    #[error("divergent integral: {0}")]
    DivergentIntegral(String),
    /// The downgraded space collapses to {0} for these parameters.
    #[error("trivial downgraded space: {0}")]
    TrivialSpace(String),
    /// Malformed family specification.
    #[error("family spec error: {0}")]
    Spec(String),
    /// Input is degenerate for the requested statistic (e.g. identically zero).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
