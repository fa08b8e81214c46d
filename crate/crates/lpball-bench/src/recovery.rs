//! Sparse recovery from noisy Gaussian measurements.

use ndarray::{Array1, ArrayView1};
use rayon::prelude::*;

use lpball::{
    iht_solve, l1_gpm_solve, lp_norm_p, BaselineConfig, HybridSolver, LeastSquares, LpBall,
    Objective, SolveReport, SolverConfig,
};

use crate::data::{gen_recovery_instance, RecoveryInstance};
use crate::spec::{median, ExperimentKind, ExperimentSpec, SolverKind, Trial, TrialResult};
use crate::{BenchError, Result};

/// A trial succeeds when `||x - x_hat|| / ||x_hat||` is below this.
pub const SUCCESS_TOL: f64 = 1e-3;
pub const FALSE_NONZERO_THRESHOLDS: [f64; 3] = [1e-3, 1e-4, 1e-5];

/// Empirical success probability at one `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccessRate {
    pub solver: SolverKind,
    pub m: usize,
    pub trials: usize,
    pub failed: usize,
    pub successes: usize,
    /// Successes over all trials; solver failures count as misses.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FalseNonzeroRow {
    pub solver: SolverKind,
    pub threshold: f64,
    pub trial: usize,
    pub count: usize,
}

#[derive(Debug, Clone)]
pub struct RecoveryReport {
    pub trials: Vec<Trial>,
    pub curve: Vec<SuccessRate>,
    /// Successful trials at the largest `m` only.
    pub false_nonzeros: Vec<FalseNonzeroRow>,
}

impl RecoveryReport {
    pub fn rate(&self, solver: SolverKind, m: usize) -> Option<&SuccessRate> {
        self.curve.iter().find(|r| r.solver == solver && r.m == m)
    }

    pub fn median_false_nonzeros(&self, solver: SolverKind, threshold: f64) -> Option<f64> {
        median(
            self.false_nonzeros
                .iter()
                .filter(|r| r.solver == solver && r.threshold == threshold)
                .map(|r| r.count as f64)
                .collect(),
        )
    }
}

pub fn relative_error(x: ArrayView1<f64>, x_hat: ArrayView1<f64>) -> f64 {
    let d = &x - &x_hat;
    d.dot(&d).sqrt() / x_hat.dot(&x_hat).sqrt()
}

/// Entries above `threshold` in magnitude where `x_hat` is zero.
pub fn count_false_nonzeros(x: ArrayView1<f64>, x_hat: ArrayView1<f64>, threshold: f64) -> usize {
    x.iter()
        .zip(x_hat.iter())
        .filter(|(v, h)| **h == 0.0 && v.abs() > threshold)
        .count()
}

/// Runs one solver from the origin with `gamma = s`.
pub fn solve_recovery(
    solver: SolverKind,
    objective: &LeastSquares,
    p: f64,
    s: usize,
) -> lpball::Result<SolveReport> {
    let x0 = Array1::zeros(objective.dim());
    let lipschitz = objective.lipschitz();
    let radius = s as f64;
    match solver {
        SolverKind::Hybrid => {
            let ball = LpBall::new(p, radius)?;
            HybridSolver::new(objective, ball, SolverConfig::for_lipschitz(lipschitz))?
                .solve(x0.view())
        }
        SolverKind::L1gpm => l1_gpm_solve(
            objective,
            radius,
            &BaselineConfig::for_lipschitz(lipschitz),
            x0.view(),
        ),
        SolverKind::Iht => iht_solve(
            objective,
            s,
            &BaselineConfig::for_lipschitz(lipschitz),
            x0.view(),
        ),
    }
}

fn evaluate(
    solver: SolverKind,
    report: &SolveReport,
    inst: &RecoveryInstance,
    p: f64,
    s: usize,
) -> TrialResult {
    let x = report.x_final.view();
    let n = x.len() as f64;
    let constraint = match solver {
        SolverKind::Hybrid => lp_norm_p(x, p),
        SolverKind::L1gpm => x.iter().map(|v| v.abs()).sum(),
        SolverKind::Iht => x.iter().filter(|v| **v != 0.0).count() as f64,
    };
    let rel = relative_error(x, inst.x_hat.view());
    TrialResult {
        objective: report.f_final,
        r_fea: (constraint - s as f64).abs() / n,
        wall_time: report.wall_time,
        iterations: report.iterations,
        rel_error: Some(rel),
        success: Some(rel < SUCCESS_TOL),
        false_nonzeros: FALSE_NONZERO_THRESHOLDS
            .iter()
            .map(|&t| (t, count_false_nonzeros(x, inst.x_hat.view(), t)))
            .collect(),
    }
}

pub fn run_recovery_experiment(spec: &ExperimentSpec) -> Result<RecoveryReport> {
    spec.validate()?;
    if spec.kind != ExperimentKind::SparseRecovery {
        return Err(BenchError::InvalidSpec(
            "expected a sparse_recovery spec".into(),
        ));
    }
    let (n, p) = (spec.n[0], spec.p_values[0]);
    let s = spec.s.expect("validated");

    let jobs: Vec<(usize, usize)> = spec
        .m
        .iter()
        .flat_map(|&m| (0..spec.trials).map(move |t| (m, t)))
        .collect();
    let mut trials: Vec<Trial> = jobs
        .par_iter()
        .flat_map_iter(|&(m, trial)| {
            let inst = gen_recovery_instance(n, m, s, spec.seed, trial);
            // The Lipschitz estimate is shared by all solvers and kept out of
            // their timings.
            let objective = LeastSquares::new(inst.a.clone(), inst.b.clone());
            spec.solvers
                .iter()
                .map(|&solver| {
                    let outcome = objective
                        .as_ref()
                        .map_err(|e| e.to_string())
                        .and_then(|obj| {
                            solve_recovery(solver, obj, p, s).map_err(|e| e.to_string())
                        })
                        .map(|report| evaluate(solver, &report, &inst, p, s));
                    Trial {
                        solver,
                        n,
                        m: Some(m),
                        p,
                        trial,
                        outcome,
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    trials.sort_by(Trial::sort_key);

    let mut solvers = spec.solvers.clone();
    solvers.sort();
    solvers.dedup();
    let mut m_grid = spec.m.clone();
    m_grid.sort();
    m_grid.dedup();

    let mut curve = Vec::new();
    for &solver in &solvers {
        for &m in &m_grid {
            let group: Vec<&Trial> = trials
                .iter()
                .filter(|t| t.solver == solver && t.m == Some(m))
                .collect();
            let failed = group.iter().filter(|t| t.outcome.is_err()).count();
            let successes = group
                .iter()
                .filter(|t| t.ok().and_then(|r| r.success) == Some(true))
                .count();
            curve.push(SuccessRate {
                solver,
                m,
                trials: group.len(),
                failed,
                successes,
                rate: successes as f64 / group.len() as f64,
            });
        }
    }

    let m_max = *m_grid.last().expect("validated");
    let mut false_nonzeros = Vec::new();
    for &solver in &solvers {
        for &threshold in &FALSE_NONZERO_THRESHOLDS {
            for t in trials
                .iter()
                .filter(|t| t.solver == solver && t.m == Some(m_max))
            {
                let Some(r) = t.ok().filter(|r| r.success == Some(true)) else {
                    continue;
                };
                let count = r
                    .false_nonzeros
                    .iter()
                    .find(|(th, _)| *th == threshold)
                    .map(|(_, c)| *c)
                    .expect("every threshold is counted");
                false_nonzeros.push(FalseNonzeroRow {
                    solver,
                    threshold,
                    trial: t.trial,
                    count,
                });
            }
        }
    }

    Ok(RecoveryReport {
        trials,
        curve,
        false_nonzeros,
    })
}
