//! Reference solvers for the least-squares problem under l0 and l1 balls.

use std::time::Instant;

use ndarray::{Array1, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::objectives::{LeastSquares, Objective};
use crate::solver::SolveReport;
use crate::trace::{Branch, IterateRecord, TerminationReason};
use crate::wproj::{hard_threshold, l1_ball_project};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    pub stepsize: f64,
    pub max_iter: usize,
    /// Stop once `||x_{k+1} - x_k||_2 <= step_tol`.
    pub step_tol: f64,
}

impl BaselineConfig {
    /// `stepsize = 0.5 / lipschitz`, the same rule as the hybrid solver.
    pub fn for_lipschitz(lipschitz: f64) -> Self {
        Self {
            stepsize: 0.5 / lipschitz,
            max_iter: 100_000,
            step_tol: 1e-5,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.stepsize > 0.0 && self.stepsize.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "stepsize must be positive, got {}",
                self.stepsize
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Iterative hard thresholding: `x <- H_s(x - t grad f(x))`.
///
/// Records `lpnorm_p` as the support size (the l0 "norm").
pub fn iht_solve(
    objective: &LeastSquares,
    s: usize,
    cfg: &BaselineConfig,
    x0: ArrayView1<f64>,
) -> Result<SolveReport> {
    let n = objective.dim();
    if s == 0 || s > n {
        return Err(Error::InvalidInput(format!(
            "sparsity must lie in 1..={n}, got {s}"
        )));
    }
    projected_gradient(objective, cfg, x0, false, |u| {
        let x = hard_threshold(u.view(), s);
        let nnz = x.iter().filter(|v| **v != 0.0).count() as f64;
        Ok((x, nnz))
    })
}

/// Projected gradient onto the l1 ball: `x <- P_{||.||_1 <= r}(x - t grad f(x))`.
///
/// Records `lpnorm_p` as `||x||_1`.
pub fn l1_gpm_solve(
    objective: &LeastSquares,
    radius: f64,
    cfg: &BaselineConfig,
    x0: ArrayView1<f64>,
) -> Result<SolveReport> {
    if !(radius > 0.0) {
        return Err(Error::InvalidInput(format!(
            "radius must be positive, got {radius}"
        )));
    }
    projected_gradient(objective, cfg, x0, true, |u| {
        let x = l1_ball_project(u.view(), radius)?;
        let l1 = x.iter().map(|v| v.abs()).sum();
        Ok((x, l1))
    })
}

fn projected_gradient(
    objective: &LeastSquares,
    cfg: &BaselineConfig,
    x0: ArrayView1<f64>,
    convex: bool,
    project: impl Fn(Array1<f64>) -> Result<(Array1<f64>, f64)>,
) -> Result<SolveReport> {
    cfg.validate()?;
    if x0.len() != objective.dim() {
        return Err(Error::DimensionMismatch {
            expected: objective.dim(),
            got: x0.len(),
        });
    }
    let start = Instant::now();
    let mut x = x0.to_owned();
    let (mut f, mut grad) = objective.value_and_gradient(x.view());
    let f_initial = f;
    let mut trace = Vec::new();
    let mut reason = TerminationReason::MaxIter;
    let mut nonmonotone = 0;

    for k in 0..cfg.max_iter {
        let (x_next, size) = project(&x - &(&grad * cfg.stepsize))?;
        let diff = &x_next - &x;
        let step_norm = diff.dot(&diff).sqrt();
        let (f_next, grad_next) = objective.value_and_gradient(x_next.view());
        if f_next > f {
            nonmonotone += 1;
        }
        // Projected gradient onto a convex set with stepsize below 1/L
        // never increases the objective.
        debug_assert!(
            !convex
                || cfg.stepsize * objective.lipschitz() > 1.0
                || f_next <= f + 1e-9 * (1.0 + f.abs()),
            "l1 projected gradient increased the objective at iteration {k}: {f} -> {f_next}"
        );
        trace.push(IterateRecord {
            k,
            branch: Branch::Projection,
            f_value: f_next,
            stepsize: cfg.stepsize,
            fw_gap: None,
            proj_decrease: None,
            residual_s2: None,
            step_norm,
            lpnorm_p: size,
            support_size: x_next.iter().filter(|v| **v != 0.0).count(),
        });
        x = x_next;
        f = f_next;
        grad = grad_next;
        if step_norm <= cfg.step_tol {
            reason = TerminationReason::BoundaryStall;
            break;
        }
    }

    let iterations = trace.len();
    Ok(SolveReport {
        x_final: x,
        f_final: f,
        f_initial,
        reason,
        trace,
        iterations,
        wall_time: start.elapsed(),
        residual_s2: None,
        fw_gap_final: None,
        xi_final: None,
        nonmonotone_steps: nonmonotone,
    })
}
