use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The gradient (or the search direction) vanished; the current point is
    /// first-order stationary and no step is defined.
    #[error("point is first-order stationary")]
    Stationary,

    #[error("bisection bracket is invalid: phi(0) = {phi_lo:e}, phi(hi) = {phi_hi:e}")]
    InvalidBracket { phi_lo: f64, phi_hi: f64 },

    #[error("boundary point has an empty support")]
    DegenerateBoundary,

    #[error("starting point is infeasible: ||x0||_p^p = {norm:e} > gamma = {gamma:e}")]
    InvalidStart { norm: f64, gamma: f64 },

    #[error("iterate {iteration} left the feasible set: ||x||_p^p = {norm:e} > gamma = {gamma:e}")]
    Infeasible {
        iteration: usize,
        norm: f64,
        gamma: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}
