//! First-order solvers for smooth minimization over the nonconvex lp ball
//! `{x : sum_i |x_i|^p <= gamma}` with `0 < p < 1`.
//!
//! The main entry point is [`HybridSolver`], which alternates between a
//! Frank-Wolfe step while the iterate is strictly inside the ball and a
//! weighted-l1 gradient projection step once the iterate sits on the
//! boundary. The building blocks are exposed as well:
//!
//! * [`ball`]: the constraint set, `||x||_p^p` and position classification.
//! * [`objectives`]: value/gradient/Lipschitz oracles for the projection and
//!   least-squares problems, a power method and a finite-difference check.
//! * [`fw`]: the closed-form linear minimization oracle over the lp ball,
//!   the Armijo-safe trial step and the boundary bisection.
//! * [`wproj`]: exact weighted nonnegative l1 projection, the boundary
//!   subproblem, plain l1-ball projection and hard thresholding.
//! * [`solver`]: the hybrid driver, stationarity residuals and the
//!   iteration-bound monitor.
//! * [`baselines`]: iterative hard thresholding and l1-ball projected
//!   gradient for least squares.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ball;
pub mod baselines;
pub mod config;
mod error;
pub mod fw;
pub mod objectives;
pub mod solver;
pub mod trace;
pub mod wproj;

pub use ball::{classify_position, lp_norm_p, LpBall, Position};
pub use baselines::{iht_solve, l1_gpm_solve, BaselineConfig};
pub use config::SolverConfig;
pub use error::{Error, Result};
pub use objectives::{LeastSquares, Objective, QuadraticDistance};
pub use solver::{HybridSolver, SolveReport};
pub use trace::{Branch, IterateRecord, TerminationReason};
pub use wproj::ProjectionResult;
