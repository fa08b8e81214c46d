//! The hybrid Frank-Wolfe / gradient-projection driver.
//!
//! Each iteration classifies `x_k` against the ball:
//!
//! * interior: take the Frank-Wolfe vertex `s_k`, the Armijo-safe trial
//!   stepsize, and cut the step back to the boundary if the trial point is
//!   infeasible;
//! * boundary, or right after a boundary hit: solve the weighted-l1
//!   projection subproblem on the support of `x_k`.
//!
//! The run stops when an interior Frank-Wolfe gap drops below `gap_tol`, when
//! a boundary step moves less than `step_tol`, or after `max_iter` updates.

use std::time::{Duration, Instant};

use ndarray::{Array1, ArrayView1};
use serde::Serialize;

use crate::ball::{lp_norm_p, position_of_norm, snap_zeros, support_size, LpBall, Position};
use crate::config::SolverConfig;
use crate::fw::{boundary_bisection, boundary_residual, fw_direction, fw_gap, trial_stepsize};
use crate::objectives::Objective;
use crate::trace::{Branch, IterateRecord, TerminationReason};
use crate::wproj::solve_p2;
use crate::{Error, Result};

/// Result of a solver run. Shared by the hybrid solver and the baselines.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub x_final: Array1<f64>,
    pub f_final: f64,
    /// Objective at the starting point.
    pub f_initial: f64,
    pub reason: TerminationReason,
    pub trace: Vec<IterateRecord>,
    pub iterations: usize,
    pub wall_time: Duration,
    /// Stationarity residual of the last projection step, if the run ended
    /// on one.
    pub residual_s2: Option<f64>,
    /// Frank-Wolfe gap at the last interior point visited.
    pub fw_gap_final: Option<f64>,
    /// Multiplier of the lp constraint from the last projection step, if the
    /// run ended on one.
    pub xi_final: Option<f64>,
    /// Steps that increased the objective. Always zero for the hybrid solver;
    /// iterative hard thresholding carries no such guarantee.
    pub nonmonotone_steps: usize,
}

/// Minimizes a smooth objective over an lp ball.
pub struct HybridSolver<'a, O: Objective + ?Sized> {
    objective: &'a O,
    ball: LpBall,
    config: SolverConfig,
}

impl<'a, O: Objective + ?Sized> HybridSolver<'a, O> {
    /// Fails unless the configuration is valid and `beta < 1 / L`.
    pub fn new(objective: &'a O, ball: LpBall, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let lipschitz = objective.lipschitz();
        if !(lipschitz > 0.0 && lipschitz.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "objective Lipschitz constant must be positive, got {lipschitz}"
            )));
        }
        if config.beta * lipschitz >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "beta = {} must be below 1/L = {}",
                config.beta,
                1.0 / lipschitz
            )));
        }
        Ok(Self {
            objective,
            ball,
            config,
        })
    }

    pub fn ball(&self) -> &LpBall {
        &self.ball
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn solve(&self, x0: ArrayView1<f64>) -> Result<SolveReport> {
        self.solve_with_callback(x0, |_, _| {})
    }

    /// Runs the solver, handing every [`IterateRecord`] and the new iterate
    /// to `callback` as they are produced.
    pub fn solve_with_callback(
        &self,
        x0: ArrayView1<f64>,
        mut callback: impl FnMut(&IterateRecord, ArrayView1<f64>),
    ) -> Result<SolveReport> {
        let start = Instant::now();
        let cfg = &self.config;
        let ball = &self.ball;
        let (p, gamma) = (ball.p(), ball.gamma());
        let lipschitz = self.objective.lipschitz();

        if x0.len() != self.objective.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.objective.dim(),
                got: x0.len(),
            });
        }
        let mut x = x0.to_owned();
        snap_zeros(&mut x, cfg.zero_tol);
        let mut norm = lp_norm_p(x.view(), p);
        if position_of_norm(norm, gamma, cfg.boundary_tol) == Position::Infeasible {
            return Err(Error::InvalidStart { norm, gamma });
        }

        let (mut f, mut grad) = self.objective.value_and_gradient(x.view());
        let f_initial = f;
        let mut trace = Vec::new();
        let mut reason = TerminationReason::MaxIter;
        let mut fw_gap_final = None;
        let mut last_projection: Option<(f64, f64)> = None;

        for k in 0..cfg.max_iter {
            let mut position = position_of_norm(norm, gamma, cfg.boundary_tol);
            // A boundary hit can come back slightly inside once the tiny
            // coordinate it created is snapped to zero. Repeating the same
            // Frank-Wolfe step would then make no progress.
            if position == Position::Interior
                && trace
                    .last()
                    .is_some_and(|r: &IterateRecord| r.branch == Branch::FWBoundaryHit)
            {
                position = Position::Boundary;
            }
            let (mut x_next, record_data) = match position {
                Position::Infeasible => {
                    return Err(Error::Infeasible {
                        iteration: k,
                        norm,
                        gamma,
                    })
                }
                Position::Interior => {
                    let s = match fw_direction(grad.view(), ball) {
                        Ok(s) => s,
                        Err(Error::Stationary) => {
                            fw_gap_final = Some(0.0);
                            reason = TerminationReason::FWGapSmall;
                            break;
                        }
                        Err(e) => return Err(e),
                    };
                    let gap = fw_gap(grad.view(), x.view(), s.view());
                    fw_gap_final = Some(gap);
                    last_projection = None;
                    if gap <= cfg.gap_tol {
                        reason = TerminationReason::FWGapSmall;
                        break;
                    }
                    let d = &s - &x;
                    let alpha_trial = trial_stepsize(gap, d.view(), lipschitz, cfg.eta)?;
                    let phi = boundary_residual(x.view(), s.view(), alpha_trial, ball);
                    let (alpha, hit) = if phi <= 0.0 {
                        (alpha_trial, false)
                    } else if phi <= cfg.bisection_tol {
                        (alpha_trial, true)
                    } else {
                        let a = boundary_bisection(
                            x.view(),
                            s.view(),
                            alpha_trial,
                            ball,
                            cfg.bisection_tol,
                        )?;
                        (a, true)
                    };
                    let branch = if hit {
                        Branch::FWBoundaryHit
                    } else {
                        Branch::FWInterior
                    };
                    (&x + &(&d * alpha), StepData::fw(branch, alpha, gap))
                }
                Position::Boundary => {
                    let r = solve_p2(x.view(), grad.view(), ball, cfg.beta, cfg.zero_tol)?;
                    let res = residual_s2(x.view(), r.x_next.view(), r.xi, grad.view(), ball);
                    last_projection = Some((res, r.xi));
                    (r.x_next, StepData::projection(cfg.beta, r.decrease, res))
                }
            };
            snap_zeros(&mut x_next, cfg.zero_tol);

            let diff = &x_next - &x;
            let step_norm = diff.dot(&diff).sqrt();
            let norm_next = lp_norm_p(x_next.view(), p);
            let (f_next, grad_next) = self.objective.value_and_gradient(x_next.view());
            let record = IterateRecord {
                k,
                branch: record_data.branch,
                f_value: f_next,
                stepsize: record_data.stepsize,
                fw_gap: record_data.fw_gap,
                proj_decrease: record_data.proj_decrease,
                residual_s2: record_data.residual_s2,
                step_norm,
                lpnorm_p: norm_next,
                support_size: support_size(x_next.view()),
            };
            debug_assert!(
                norm_next <= gamma + cfg.boundary_tol,
                "iterate {k} infeasible: {norm_next} > {gamma}"
            );
            debug_assert!(
                decrease_violation(&record, f, lipschitz, ball, cfg).is_none(),
                "iteration {k}: {}",
                decrease_violation(&record, f, lipschitz, ball, cfg).unwrap_or_default()
            );
            callback(&record, x_next.view());
            let stalled = record.branch == Branch::Projection && step_norm <= cfg.step_tol;
            trace.push(record);

            x = x_next;
            norm = norm_next;
            f = f_next;
            grad = grad_next;
            if stalled {
                reason = TerminationReason::BoundaryStall;
                break;
            }
        }

        let iterations = trace.len();
        let ended_on_projection = trace.last().is_some_and(|r| r.branch == Branch::Projection);
        let (residual_s2, xi_final) = match last_projection {
            Some((res, xi)) if ended_on_projection => (Some(res), Some(xi)),
            _ => (None, None),
        };
        Ok(SolveReport {
            x_final: x,
            f_final: f,
            f_initial,
            reason,
            trace,
            iterations,
            wall_time: start.elapsed(),
            residual_s2,
            fw_gap_final,
            xi_final,
            nonmonotone_steps: 0,
        })
    }
}

struct StepData {
    branch: Branch,
    stepsize: f64,
    fw_gap: Option<f64>,
    proj_decrease: Option<f64>,
    residual_s2: Option<f64>,
}

impl StepData {
    fn fw(branch: Branch, alpha: f64, gap: f64) -> Self {
        Self {
            branch,
            stepsize: alpha,
            fw_gap: Some(gap),
            proj_decrease: None,
            residual_s2: None,
        }
    }

    fn projection(beta: f64, decrease: f64, residual: f64) -> Self {
        Self {
            branch: Branch::Projection,
            stepsize: beta,
            fw_gap: None,
            proj_decrease: Some(decrease),
            residual_s2: Some(residual),
        }
    }
}

/// Checks the per-branch sufficient-decrease guarantees for one record,
/// given the objective value before the step. Returns a description of the
/// first violated inequality.
///
/// * full Frank-Wolfe step: `df >= min(eta gap, eta (1 - eta) gap^2 / (2 L gamma^(2/p)))`
/// * boundary-hit step: `df >= eta alpha gap`
/// * projection step: `df >= dP >= ||dx||^2 / (2 beta)`
///
/// A relative slack of `1e-9 (1 + |f|)` absorbs rounding.
pub fn decrease_violation(
    record: &IterateRecord,
    f_before: f64,
    lipschitz: f64,
    ball: &LpBall,
    cfg: &SolverConfig,
) -> Option<String> {
    let df = f_before - record.f_value;
    let slack = 1e-9 * (1.0 + f_before.abs());
    let eta = cfg.eta;
    match record.branch {
        Branch::FWInterior => {
            let gap = record.fw_gap?;
            let c1 = eta * (1.0 - eta) / (2.0 * lipschitz * ball.gamma().powf(2.0 / ball.p()));
            let bound = (eta * gap).min(c1 * gap * gap);
            (df < bound - slack).then(|| format!("FW decrease {df:e} below {bound:e}"))
        }
        Branch::FWBoundaryHit => {
            let bound = eta * record.stepsize * record.fw_gap?;
            (df < bound - slack).then(|| format!("boundary-hit decrease {df:e} below {bound:e}"))
        }
        Branch::Projection => {
            let dp = record.proj_decrease?;
            let quad = record.step_norm * record.step_norm / (2.0 * cfg.beta);
            if dp < quad - slack {
                Some(format!("subproblem decrease {dp:e} below {quad:e}"))
            } else if df < dp - slack {
                Some(format!(
                    "projection decrease {df:e} below subproblem decrease {dp:e}"
                ))
            } else {
                None
            }
        }
    }
}

/// Squared stationarity residual of a projection step,
/// `sum_{i in supp(x_next)} (p xi sgn(x_k,i) |x_k,i|^(p-1) + grad_i)^2`.
///
/// The sum runs over the support of `x_next`, where the sign multipliers
/// vanish, so it equals `||x_k - x_next||^2 / beta^2` restricted there.
pub fn residual_s2(
    x_k: ArrayView1<f64>,
    x_next: ArrayView1<f64>,
    xi: f64,
    grad: ArrayView1<f64>,
    ball: &LpBall,
) -> f64 {
    let p = ball.p();
    x_k.iter()
        .zip(x_next.iter())
        .zip(grad.iter())
        .filter(|((xk, xn), _)| **xn != 0.0 && **xk != 0.0)
        .map(|((xk, _), g)| {
            let r = p * xi * xk.signum() * xk.abs().powf(p - 1.0) + g;
            r * r
        })
        .sum()
}

/// Optimality and feasibility residuals for the projection problem
/// `min 0.5 ||x - y||^2` over the ball:
///
/// ```text
/// R_opt = (1/n) sum_i |(x_i - y_i) x_i + lambda p |x_i|^p|
/// R_fea = (1/n) | ||x||_p^p - gamma |
/// ```
pub fn r_opt_r_fea(
    x: ArrayView1<f64>,
    y: ArrayView1<f64>,
    lambda: f64,
    ball: &LpBall,
) -> (f64, f64) {
    let n = x.len().max(1) as f64;
    let p = ball.p();
    let r_opt = x
        .iter()
        .zip(y.iter())
        .map(|(xi, yi)| {
            let pw = if *xi == 0.0 { 0.0 } else { xi.abs().powf(p) };
            ((xi - yi) * xi + lambda * p * pw).abs()
        })
        .sum::<f64>()
        / n;
    let r_fea = (lp_norm_p(x, p) - ball.gamma()).abs() / n;
    (r_opt, r_fea)
}

/// Least-squares fit of the lp multiplier `xi >= 0` in
/// `grad_i + xi p |x_i|^(p-1) sgn(x_i) = 0` over the support of `x`.
/// Used when a run ends without a final projection step.
pub fn fit_multiplier(x: ArrayView1<f64>, grad: ArrayView1<f64>, p: f64) -> f64 {
    let (num, den) = x
        .iter()
        .zip(grad.iter())
        .filter(|(xi, _)| **xi != 0.0)
        .fold((0.0, 0.0), |(num, den), (xi, g)| {
            let v = p * xi.abs().powf(p - 1.0) * xi.signum();
            (num - g * v, den + v * v)
        });
    if den > 0.0 {
        (num / den).max(0.0)
    } else {
        0.0
    }
}

/// Worst-case iteration count to reach optimality error `epsilon` for a
/// convex objective:
/// `ceil(2 (f0 - f_lower) / (min(C1, C2) epsilon) + 1)` with
/// `C1 = eta (1 - eta) / (2 L gamma^(2/p))` and `C2 = beta / 2`.
pub fn complexity_bound(
    f0: f64,
    f_lower: f64,
    lipschitz: f64,
    eta: f64,
    beta: f64,
    ball: &LpBall,
    epsilon: f64,
) -> f64 {
    let c1 = eta * (1.0 - eta) / (2.0 * lipschitz * ball.gamma().powf(2.0 / ball.p()));
    let c2 = beta / 2.0;
    (2.0 * (f0 - f_lower) / (c1.min(c2) * epsilon) + 1.0).ceil()
}

/// Checks the worst-case iteration bound on a trace.
///
/// The first iteration that is either a full Frank-Wolfe step with
/// `gap^2 < epsilon` (the gap upper-bounds the optimality error for convex
/// objectives) or a projection step with `residual_s2 < epsilon` must come
/// no later than [`complexity_bound`]. A trace without such an iteration
/// passes only if it is not longer than the bound.
#[allow(clippy::too_many_arguments)]
pub fn complexity_monitor(
    trace: &[IterateRecord],
    f0: f64,
    f_lower: f64,
    lipschitz: f64,
    eta: f64,
    beta: f64,
    ball: &LpBall,
    epsilon: f64,
) -> bool {
    let bound = complexity_bound(f0, f_lower, lipschitz, eta, beta, ball, epsilon);
    let hit = trace.iter().find(|r| match r.branch {
        Branch::FWInterior => r.fw_gap.is_some_and(|g| g * g < epsilon),
        Branch::Projection => r.residual_s2.is_some_and(|e| e < epsilon),
        Branch::FWBoundaryHit => false,
    });
    match hit {
        Some(r) => (r.k as f64) <= bound,
        None => (trace.len() as f64) <= bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{LeastSquares, QuadraticDistance};
    use ndarray::{array, Array2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn record(k: usize, branch: Branch, gap: Option<f64>, res: Option<f64>) -> IterateRecord {
        IterateRecord {
            k,
            branch,
            f_value: 0.0,
            stepsize: 0.1,
            fw_gap: gap,
            proj_decrease: res.map(|_| 0.0),
            residual_s2: res,
            step_norm: 0.0,
            lpnorm_p: 0.0,
            support_size: 0,
        }
    }

    #[test]
    fn interior_target_is_reached() {
        let y = array![0.1, -0.05, 0.02];
        let obj = QuadraticDistance::new(y.clone());
        let ball = LpBall::new(0.5, 2.0).unwrap();
        let solver = HybridSolver::new(&obj, ball, SolverConfig::for_lipschitz(1.0)).unwrap();
        let report = solver.solve(Array1::zeros(3).view()).unwrap();
        assert!(report.f_final <= 1e-8, "{}", report.f_final);
        assert_eq!(report.reason, TerminationReason::FWGapSmall);
        assert_eq!(report.iterations, report.trace.len());
    }

    #[test]
    fn axis_projection() {
        // Minimizing 0.5 ||x - (2, 0)||^2 over ||x||_0.5^0.5 <= 1 gives (1, 0).
        let obj = QuadraticDistance::new(array![2.0, 0.0]);
        let ball = LpBall::new(0.5, 1.0).unwrap();
        let solver = HybridSolver::new(&obj, ball, SolverConfig::for_lipschitz(1.0)).unwrap();
        let report = solver.solve(Array1::zeros(2).view()).unwrap();
        assert!((report.x_final[0] - 1.0).abs() < 1e-8);
        assert_eq!(report.x_final[1], 0.0);
        assert_eq!(report.reason, TerminationReason::BoundaryStall);
    }

    #[test]
    fn axis_projection_grid_oracle() {
        // Grid search over the boundary curve sqrt|x1| + sqrt|x2| = 1 and the
        // axis segment, then local refinement.
        let y = [2.0, 0.0];
        let f = |a: f64, b: f64| 0.5 * ((a - y[0]).powi(2) + (b - y[1]).powi(2));
        let mut best = (f64::INFINITY, 0.0, 0.0);
        let scan = |lo: f64, hi: f64, steps: usize, best: &mut (f64, f64, f64)| {
            for i in 0..=steps {
                let t = lo + (hi - lo) * i as f64 / steps as f64;
                for (sa, sb) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    let a = sa * t * t;
                    let b = sb * (1.0 - t) * (1.0 - t);
                    let v = f(a, b);
                    if v < best.0 {
                        *best = (v, a, b);
                    }
                }
            }
        };
        scan(0.0, 1.0, 10_000, &mut best);
        let t = best.1.abs().sqrt();
        scan((t - 1e-3).max(0.0), (t + 1e-3).min(1.0), 10_000, &mut best);
        assert!((best.1 - 1.0).abs() < 1e-6 && best.2.abs() < 1e-6);

        let obj = QuadraticDistance::new(array![2.0, 0.0]);
        let ball = LpBall::new(0.5, 1.0).unwrap();
        let solver = HybridSolver::new(&obj, ball, SolverConfig::for_lipschitz(1.0)).unwrap();
        let x = solver.solve(Array1::zeros(2).view()).unwrap().x_final;
        assert!((x[0] - best.1).abs() < 1e-6 && (x[1] - best.2).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_setup() {
        let obj = QuadraticDistance::new(array![2.0, 0.0]);
        let ball = LpBall::new(0.5, 1.0).unwrap();
        assert!(HybridSolver::new(&obj, ball, SolverConfig::with_beta(1.0)).is_err());
        let solver = HybridSolver::new(&obj, ball, SolverConfig::for_lipschitz(1.0)).unwrap();
        assert!(matches!(
            solver.solve(array![4.0, 0.0].view()),
            Err(Error::InvalidStart { .. })
        ));
        assert!(matches!(
            solver.solve(array![0.0].view()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn residual_examples() {
        let ball = LpBall::new(0.5, 1.0).unwrap();
        let r = residual_s2(
            array![1.0].view(),
            array![1.0].view(),
            4.0,
            array![-2.0].view(),
            &ball,
        );
        assert!(r.abs() < 1e-24);

        // fixed point of a stationary boundary point gives zero residual
        let x = array![1.0, 0.0, -1.0];
        let g = array![-0.5, 0.3, 0.5];
        let ball2 = LpBall::new(0.5, 2.0).unwrap();
        let proj = solve_p2(x.view(), g.view(), &ball2, 0.5, 1e-14).unwrap();
        assert!((&proj.x_next - &x).iter().all(|v| v.abs() < 1e-14));
        let res = residual_s2(x.view(), proj.x_next.view(), proj.xi, g.view(), &ball2);
        assert!(res < 1e-20, "{res}");
    }

    #[test]
    fn residual_matches_step_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..200 {
            let n = rng.random_range(1..9);
            let ball = LpBall::new(rng.random_range(0.2..0.9), rng.random_range(0.5..3.0)).unwrap();
            let x: Array1<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let x = &x * (ball.gamma() / lp_norm_p(x.view(), ball.p())).powf(1.0 / ball.p());
            let g: Array1<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let beta = rng.random_range(0.05..1.0);
            let r = solve_p2(x.view(), g.view(), &ball, beta, 1e-14).unwrap();
            let res = residual_s2(x.view(), r.x_next.view(), r.xi, g.view(), &ball);
            let direct: f64 = (0..n)
                .filter(|&i| r.x_next[i] != 0.0)
                .map(|i| ((x[i] - r.x_next[i]) / beta).powi(2))
                .sum();
            assert!(
                (res - direct).abs() <= 1e-8 * (1.0 + direct),
                "{res} vs {direct}"
            );
        }
    }

    #[test]
    fn fixed_point_is_stationary() {
        // A boundary fixed point of the subproblem satisfies the lp KKT system.
        let ball = LpBall::new(0.5, 2.0).unwrap();
        let x = array![1.0, 0.0, -1.0];
        let xi = 0.8;
        let g = array![-xi * 0.5, 1.7, xi * 0.5];
        let r = solve_p2(x.view(), g.view(), &ball, 0.3, 1e-14).unwrap();
        assert!((&r.x_next - &x).iter().all(|v| v.abs() < 1e-12));
        for i in [0, 2] {
            let kkt = g[i] + r.xi * 0.5 * x[i].abs().powf(-0.5) * x[i].signum();
            assert!(kkt.abs() < 1e-8);
        }
        assert!((r.xi - xi).abs() < 1e-10);
    }

    #[test]
    fn r_residuals() {
        let ball = LpBall::new(0.5, 1.0).unwrap();
        // x = (1, 0), y = (2, 0): (x1 - y1) x1 + lambda p |x1|^p = -1 + 0.5 lambda
        let (opt, fea) = r_opt_r_fea(array![1.0, 0.0].view(), array![2.0, 0.0].view(), 2.0, &ball);
        assert_eq!(opt, 0.0);
        assert_eq!(fea, 0.0);
        let (_, fea) = r_opt_r_fea(
            array![(1.0 + 1e-8f64).powi(2), 0.0].view(),
            array![2.0, 0.0].view(),
            2.0,
            &ball,
        );
        assert!(fea <= 1e-8 / 2.0 + 1e-16);
    }

    #[test]
    fn multiplier_fit() {
        let x = array![1.0, 0.0, -4.0];
        let xi = 3.0;
        let p = 0.5;
        let g = x.mapv(|v: f64| {
            if v == 0.0 {
                9.0
            } else {
                -xi * p * v.abs().powf(p - 1.0) * v.signum()
            }
        });
        assert!((fit_multiplier(x.view(), g.view(), p) - xi).abs() < 1e-12);
        assert_eq!(
            fit_multiplier(Array1::zeros(2).view(), array![1.0, 1.0].view(), p),
            0.0
        );
    }

    #[test]
    fn monitor_controls() {
        let ball = LpBall::new(0.5, 1.0).unwrap();
        let trace = vec![
            record(0, Branch::FWBoundaryHit, Some(1.0), None),
            record(1, Branch::Projection, None, Some(1e-4)),
        ];
        assert!(complexity_monitor(
            &trace, 10.0, 0.0, 1.0, 0.5, 0.5, &ball, 1e-2
        ));

        // C1 = 0.125, C2 = 0.25: bound is ceil(2 * 2.5e-3 / (0.125 * 1e-2) + 1) = 5
        assert_eq!(
            complexity_bound(2.5e-3, 0.0, 1.0, 0.5, 0.5, &ball, 1e-2),
            5.0
        );
        let mut long: Vec<_> = (0..7)
            .map(|k| record(k, Branch::FWInterior, Some(1.0), None))
            .collect();
        long.push(record(7, Branch::FWInterior, Some(1e-3), None));
        assert!(!complexity_monitor(
            &long, 2.5e-3, 0.0, 1.0, 0.5, 0.5, &ball, 1e-2
        ));
        long.truncate(5);
        assert!(complexity_monitor(
            &long, 2.5e-3, 0.0, 1.0, 0.5, 0.5, &ball, 1e-2
        ));
    }

    #[test]
    fn least_squares_sparse_solution_is_recovered() {
        let a = Array2::<f64>::eye(4);
        let b = array![0.0, 3.0, 0.0, 0.0];
        let obj = LeastSquares::new(a, b.clone()).unwrap();
        let ball = LpBall::new(0.5, 3f64.sqrt()).unwrap();
        let solver =
            HybridSolver::new(&obj, ball, SolverConfig::for_lipschitz(obj.lipschitz())).unwrap();
        let report = solver.solve(Array1::zeros(4).view()).unwrap();
        // The interior rule stops once the gap (x_2 - 3)^2 is below gap_tol.
        assert_eq!(report.reason, TerminationReason::FWGapSmall);
        assert!(report.fw_gap_final.unwrap() <= 1e-5);
        assert!(
            (&report.x_final - &b).iter().all(|v| v.abs() < 1e-2),
            "{}",
            report.x_final
        );
    }

    #[test]
    fn callback_sees_every_record() {
        let obj = QuadraticDistance::new(array![2.0, -1.0, 0.5]);
        let ball = LpBall::new(0.5, 1.0).unwrap();
        let solver = HybridSolver::new(&obj, ball, SolverConfig::for_lipschitz(1.0)).unwrap();
        let mut seen = 0;
        let report = solver
            .solve_with_callback(Array1::zeros(3).view(), |_, _| seen += 1)
            .unwrap();
        assert_eq!(seen, report.iterations);
    }
}
