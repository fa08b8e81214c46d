//! Projection of Gaussian points onto an lp ball.

use ndarray::{Array1, ArrayView1};
use rayon::prelude::*;

use lpball::{lp_norm_p, HybridSolver, LpBall, QuadraticDistance, SolverConfig};

use crate::data::gen_projection_instance;
use crate::spec::{
    mean, ExperimentKind, ExperimentSpec, GammaRule, SolverKind, Trial, TrialResult,
};
use crate::{BenchError, Result};

/// Arithmetic means over the trials that solved.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSummary {
    pub solver: SolverKind,
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub failed: usize,
    pub mean_objective: Option<f64>,
    pub mean_r_fea: Option<f64>,
    pub mean_time_s: Option<f64>,
    pub mean_iterations: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ProjectionReport {
    pub trials: Vec<Trial>,
    pub summary: Vec<ProjectionSummary>,
}

impl ProjectionReport {
    pub fn summary_for(&self, n: usize, p: f64) -> Option<&ProjectionSummary> {
        self.summary.iter().find(|s| s.n == n && s.p == p)
    }
}

/// Projects `y` onto `{x : ||x||_p^p <= gamma}` from the origin with `L = 1`.
pub fn project_instance(y: ArrayView1<f64>, p: f64, gamma: f64) -> lpball::Result<TrialResult> {
    let n = y.len();
    let objective = QuadraticDistance::new(y.to_owned());
    let ball = LpBall::new(p, gamma)?;
    let solver = HybridSolver::new(&objective, ball, SolverConfig::for_lipschitz(1.0))?;
    let report = solver.solve(Array1::zeros(n).view())?;
    Ok(TrialResult {
        objective: report.f_final,
        r_fea: (lp_norm_p(report.x_final.view(), p) - gamma).abs() / n as f64,
        wall_time: report.wall_time,
        iterations: report.iterations,
        rel_error: None,
        success: None,
        false_nonzeros: Vec::new(),
    })
}

pub fn run_projection_experiment(spec: &ExperimentSpec) -> Result<ProjectionReport> {
    spec.validate()?;
    if spec.kind != ExperimentKind::LpProjection {
        return Err(BenchError::InvalidSpec(
            "expected an lp_projection spec".into(),
        ));
    }
    let GammaRule::FractionOfNorm(fraction) = spec.gamma_rule else {
        unreachable!("validated above")
    };

    let jobs: Vec<(usize, usize)> = spec
        .n
        .iter()
        .flat_map(|&n| (0..spec.trials).map(move |t| (n, t)))
        .collect();
    let mut trials: Vec<Trial> = jobs
        .par_iter()
        .flat_map_iter(|&(n, trial)| {
            let y = gen_projection_instance(n, spec.seed, trial);
            spec.p_values
                .iter()
                .map(|&p| {
                    let gamma = fraction * lp_norm_p(y.view(), p);
                    Trial {
                        solver: SolverKind::Hybrid,
                        n,
                        m: None,
                        p,
                        trial,
                        outcome: project_instance(y.view(), p, gamma).map_err(|e| e.to_string()),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    trials.sort_by(Trial::sort_key);

    let mut summary = Vec::new();
    for &n in &spec.n {
        for &p in &spec.p_values {
            let group: Vec<&Trial> = trials.iter().filter(|t| t.n == n && t.p == p).collect();
            let ok: Vec<&TrialResult> = group.iter().filter_map(|t| t.ok()).collect();
            summary.push(ProjectionSummary {
                solver: SolverKind::Hybrid,
                n,
                p,
                trials: group.len(),
                failed: group.len() - ok.len(),
                mean_objective: mean(ok.iter().map(|r| r.objective)),
                mean_r_fea: mean(ok.iter().map(|r| r.r_fea)),
                mean_time_s: mean(ok.iter().map(|r| r.wall_time.as_secs_f64())),
                mean_iterations: mean(ok.iter().map(|r| r.iterations as f64)),
            });
        }
    }
    Ok(ProjectionReport { trials, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_experiment_is_feasible_and_reproducible() {
        let spec = ExperimentSpec::projection(vec![30, 60], vec![0.5, 0.8], 4, 11);
        let a = run_projection_experiment(&spec).unwrap();
        let b = run_projection_experiment(&spec).unwrap();
        assert_eq!(a.trials.len(), 16);
        assert_eq!(a.summary.len(), 4);
        for (x, y) in a.trials.iter().zip(&b.trials) {
            let (rx, ry) = (x.ok().unwrap(), y.ok().unwrap());
            assert_eq!((x.n, x.p, x.trial), (y.n, y.p, y.trial));
            assert_eq!(rx.objective, ry.objective);
            assert!(rx.r_fea <= 1e-8, "{}", rx.r_fea);
        }
    }

    #[test]
    fn objective_is_below_the_starting_value() {
        let y = gen_projection_instance(50, 3, 0);
        let gamma = 0.01 * lp_norm_p(y.view(), 0.6);
        let r = project_instance(y.view(), 0.6, gamma).unwrap();
        assert!(r.objective < 0.5 * y.dot(&y));
    }

    #[test]
    fn summary_means_match_rows() {
        let spec = ExperimentSpec::projection(vec![40], vec![0.7], 5, 2);
        let rep = run_projection_experiment(&spec).unwrap();
        let s = rep.summary_for(40, 0.7).unwrap();
        let m = rep
            .trials
            .iter()
            .map(|t| t.ok().unwrap().objective)
            .sum::<f64>()
            / 5.0;
        assert_eq!(s.mean_objective, Some(m));
        assert_eq!((s.trials, s.failed), (5, 0));
    }

    #[test]
    fn rejects_recovery_specs() {
        let spec = ExperimentSpec::recovery(20, 2, vec![10], 0.5, vec![SolverKind::Iht], 1, 0);
        assert!(run_projection_experiment(&spec).is_err());
    }
}
