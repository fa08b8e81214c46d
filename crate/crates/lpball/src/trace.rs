//! Per-iteration records and termination reasons.

use serde::{Deserialize, Serialize};

/// Which update produced an iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Frank-Wolfe step with the full trial stepsize.
    FWInterior,
    /// Frank-Wolfe step shortened by bisection so the iterate lands on the
    /// boundary.
    FWBoundaryHit,
    /// Weighted-l1 projection step from a boundary point.
    Projection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminationReason {
    /// The last step moved at most `step_tol` (boundary fixed point for the
    /// hybrid solver, plain step stall for the baselines).
    BoundaryStall,
    /// Interior point whose Frank-Wolfe gap is at most `gap_tol`.
    FWGapSmall,
    MaxIter,
}

/// Record of iteration `k`, i.e. of the update `x_k -> x_{k+1}`.
///
/// `f_value`, `lpnorm_p` and `support_size` describe the new iterate
/// `x_{k+1}`; the branch data (`stepsize`, `fw_gap`, `proj_decrease`,
/// `residual_s2`) is evaluated at `x_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterateRecord {
    pub k: usize,
    pub branch: Branch,
    pub f_value: f64,
    /// Frank-Wolfe: the stepsize actually used. Projection: `beta`.
    pub stepsize: f64,
    /// `grad f(x_k)^T (x_k - s_k)`, Frank-Wolfe branches only.
    pub fw_gap: Option<f64>,
    /// Decrease of the projection subproblem objective, projection branch only.
    pub proj_decrease: Option<f64>,
    /// Stationarity residual of the projection step, projection branch only.
    pub residual_s2: Option<f64>,
    /// `||x_{k+1} - x_k||_2`.
    pub step_norm: f64,
    pub lpnorm_p: f64,
    pub support_size: usize,
}
