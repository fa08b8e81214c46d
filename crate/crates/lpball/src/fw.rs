//! Frank-Wolfe machinery over the lp ball.
//!
//! Minimizing the linearization `grad^T s` over `||s||_p^p <= gamma` is a
//! nonconvex problem, but its global minimizer is a signed vertex
//! `-sgn(grad_i) * gamma^(1/p) * e_i` at the coordinate of largest gradient
//! magnitude. From an interior point the step towards that vertex uses the
//! Armijo-safe trial stepsize, shortened by bisection when the trial point
//! leaves the ball.

use ndarray::{Array1, ArrayView1};

use crate::ball::{neumaier_sum, LpBall};
use crate::{Error, Result};

/// Halvings before the bisection gives up on reaching the tolerance.
pub const BISECTION_MAX_ITER: usize = 200;

/// One Frank-Wolfe update from an interior point.
#[derive(Debug, Clone, PartialEq)]
pub struct FWStep {
    /// Vertex minimizing the linearized objective over the ball.
    pub s: Array1<f64>,
    /// `grad^T (x - s) >= 0`.
    pub gap: f64,
    pub alpha_trial: f64,
    pub alpha_used: f64,
    /// The trial point was infeasible and the step stops on the boundary.
    pub hit_boundary: bool,
}

/// Global minimizer of `grad^T s` subject to `||s||_p^p <= gamma`.
///
/// Ties in `|grad_i|` go to the smallest index. A zero gradient has no
/// unique minimizer and yields [`Error::Stationary`].
pub fn fw_direction(grad: ArrayView1<f64>, ball: &LpBall) -> Result<Array1<f64>> {
    let (imax, gmax) = argmax_abs(grad).ok_or(Error::Stationary)?;
    if gmax == 0.0 {
        return Err(Error::Stationary);
    }
    let mut s = Array1::zeros(grad.len());
    s[imax] = -grad[imax].signum() * ball.vertex_radius();
    Ok(s)
}

/// Index and value of the largest `|v_i|`, first one on ties.
fn argmax_abs(v: ArrayView1<f64>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, x) in v.iter().enumerate() {
        let a = x.abs();
        match best {
            Some((_, b)) if a <= b => {}
            _ => best = Some((i, a)),
        }
    }
    best
}

/// Frank-Wolfe gap `grad^T (x - s)`.
pub fn fw_gap(grad: ArrayView1<f64>, x: ArrayView1<f64>, s: ArrayView1<f64>) -> f64 {
    neumaier_sum(
        grad.iter()
            .zip(x.iter().zip(s.iter()))
            .map(|(g, (xi, si))| g * (xi - si)),
    )
}

/// `min(1, 2 (1 - eta) gap / (L ||d||^2))`, the largest step along `d` for
/// which the Armijo condition holds for any `L`-smooth objective.
pub fn trial_stepsize(gap: f64, d: ArrayView1<f64>, lipschitz: f64, eta: f64) -> Result<f64> {
    if !(lipschitz > 0.0) {
        return Err(Error::InvalidInput(format!(
            "Lipschitz constant must be positive, got {lipschitz}"
        )));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidInput(format!(
            "eta must lie in (0, 1), got {eta}"
        )));
    }
    let dd = d.dot(&d);
    if dd == 0.0 || !(gap > 0.0) {
        return Err(Error::Stationary);
    }
    Ok((2.0 * (1.0 - eta) * gap / (lipschitz * dd)).min(1.0))
}

/// `phi(alpha) = ||x + alpha (s - x)||_p^p - gamma`.
pub fn boundary_residual(x: ArrayView1<f64>, s: ArrayView1<f64>, alpha: f64, ball: &LpBall) -> f64 {
    let p = ball.p();
    let terms = x.iter().zip(s.iter()).filter_map(|(xi, si)| {
        let v = xi + alpha * (si - xi);
        (v != 0.0).then(|| v.abs().powf(p))
    });
    neumaier_sum(terms) - ball.gamma()
}

/// Root of `phi` on `(0, alpha_hi]` by bisection.
///
/// Requires `phi(0) < 0 <= phi(alpha_hi)`. Returns the first midpoint with
/// `|phi| <= tol`; if the bracket collapses before that (after
/// [`BISECTION_MAX_ITER`] halvings) the feasible endpoint is returned.
pub fn boundary_bisection(
    x: ArrayView1<f64>,
    s: ArrayView1<f64>,
    alpha_hi: f64,
    ball: &LpBall,
    tol: f64,
) -> Result<f64> {
    let phi_lo = boundary_residual(x, s, 0.0, ball);
    let phi_hi = boundary_residual(x, s, alpha_hi, ball);
    if !(phi_lo < 0.0 && phi_hi >= 0.0 && alpha_hi > 0.0) {
        return Err(Error::InvalidBracket { phi_lo, phi_hi });
    }
    let (mut lo, mut hi) = (0.0_f64, alpha_hi);
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let phi = boundary_residual(x, s, mid, ball);
        if phi.abs() <= tol {
            return Ok(mid);
        }
        if phi < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Computes the Frank-Wolfe step from `x` (assumed interior).
///
/// The trial stepsize is kept when the trial point is feasible, or when it
/// overshoots the ball by at most `tol` (it is then on the boundary already).
/// Otherwise the stepsize is cut back to the boundary crossing.
pub fn fw_step(
    x: ArrayView1<f64>,
    grad: ArrayView1<f64>,
    ball: &LpBall,
    lipschitz: f64,
    eta: f64,
    tol: f64,
) -> Result<FWStep> {
    let s = fw_direction(grad, ball)?;
    let gap = fw_gap(grad, x, s.view());
    let d = &s - &x;
    let alpha_trial = trial_stepsize(gap, d.view(), lipschitz, eta)?;
    let phi = boundary_residual(x, s.view(), alpha_trial, ball);
    let (alpha_used, hit_boundary) = if phi <= 0.0 {
        (alpha_trial, false)
    } else if phi <= tol {
        (alpha_trial, true)
    } else {
        (
            boundary_bisection(x, s.view(), alpha_trial, ball, tol)?,
            true,
        )
    };
    Ok(FWStep {
        s,
        gap,
        alpha_trial,
        alpha_used,
        hit_boundary,
    })
}
