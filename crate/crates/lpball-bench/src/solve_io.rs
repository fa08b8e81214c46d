//! JSON front end for a single solve.
//!
//! Input is `{"y": [...]}` for a projection, or
//! `{"a": [[...], ...], "b": [...], "s": 10}` for least squares (`s` is only
//! needed for `gamma = auto`). An optional `"x0"` overrides the zero start.

use std::str::FromStr;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use lpball::solver::{fit_multiplier, r_opt_r_fea};
use lpball::{
    lp_norm_p, HybridSolver, IterateRecord, LeastSquares, LpBall, Objective, QuadraticDistance,
    SolveReport, SolverConfig, TerminationReason,
};

use crate::spec::DEFAULT_GAMMA_FRACTION;
use crate::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    Proj,
    Ls,
}

impl FromStr for ObjectiveKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "proj" => Ok(Self::Proj),
            "ls" => Ok(Self::Ls),
            _ => Err(format!("unknown objective `{s}` (expected proj or ls)")),
        }
    }
}

/// A number, or `auto` for the default rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AutoOr {
    Auto,
    Value(f64),
}

impl FromStr for AutoOr {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(Self::Auto);
        }
        s.parse()
            .map(Self::Value)
            .map_err(|_| format!("expected a number or `auto`, got `{s}`"))
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveInput {
    pub y: Option<Vec<f64>>,
    pub a: Option<Vec<Vec<f64>>>,
    pub b: Option<Vec<f64>>,
    pub s: Option<usize>,
    pub x0: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub objective: ObjectiveKind,
    pub p: f64,
    /// `auto`: `0.01 * ||y||_p^p` for projections, `s` for least squares.
    pub gamma: AutoOr,
    pub eta: f64,
    /// `auto`: `0.5 / L`.
    pub beta: AutoOr,
    pub max_iter: Option<usize>,
    pub trace: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveOutput {
    pub objective: &'static str,
    pub p: f64,
    pub gamma: f64,
    pub lipschitz: f64,
    pub beta: f64,
    pub eta: f64,
    pub reason: TerminationReason,
    pub iterations: usize,
    pub f_initial: f64,
    pub f_final: f64,
    pub lp_norm_p: f64,
    pub support_size: usize,
    pub r_fea: f64,
    /// Projection objective only.
    pub r_opt: Option<f64>,
    /// Multiplier of the lp constraint: taken from the last projection step
    /// or fitted on the support.
    pub multiplier: f64,
    pub residual_s2: Option<f64>,
    pub fw_gap_final: Option<f64>,
    pub wall_time_s: f64,
    pub x: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<IterateRecord>>,
}

fn invalid(msg: impl Into<String>) -> BenchError {
    BenchError::InvalidInput(msg.into())
}

fn matrix(rows: &[Vec<f64>]) -> Result<Array2<f64>> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if m == 0 || n == 0 {
        return Err(invalid("`a` must be a non-empty matrix"));
    }
    if rows.iter().any(|r| r.len() != n) {
        return Err(invalid("rows of `a` differ in length"));
    }
    Ok(Array2::from_shape_vec((m, n), rows.concat()).expect("shape checked"))
}

pub fn run_solve(input: &SolveInput, opts: &SolveOptions) -> Result<SolveOutput> {
    match opts.objective {
        ObjectiveKind::Proj => {
            let y = input
                .y
                .clone()
                .ok_or_else(|| invalid("projection input needs `y`"))?;
            if y.is_empty() {
                return Err(invalid("`y` is empty"));
            }
            let y = Array1::from(y);
            let gamma = match opts.gamma {
                AutoOr::Auto => DEFAULT_GAMMA_FRACTION * lp_norm_p(y.view(), opts.p),
                AutoOr::Value(g) => g,
            };
            let obj = QuadraticDistance::new(y.clone());
            let (out, report, ball) = solve_with(&obj, input, opts, gamma, "proj")?;
            let (r_opt, _) = r_opt_r_fea(report.x_final.view(), y.view(), out.multiplier, &ball);
            Ok(SolveOutput {
                r_opt: Some(r_opt),
                ..out
            })
        }
        ObjectiveKind::Ls => {
            let a = matrix(
                input
                    .a
                    .as_deref()
                    .ok_or_else(|| invalid("least-squares input needs `a`"))?,
            )?;
            let b = Array1::from(
                input
                    .b
                    .clone()
                    .ok_or_else(|| invalid("least-squares input needs `b`"))?,
            );
            let gamma = match opts.gamma {
                AutoOr::Auto => input
                    .s
                    .ok_or_else(|| invalid("gamma = auto needs `s` in the input"))?
                    as f64,
                AutoOr::Value(g) => g,
            };
            let obj = LeastSquares::new(a, b)?;
            Ok(solve_with(&obj, input, opts, gamma, "ls")?.0)
        }
    }
}

fn solve_with<O: Objective>(
    obj: &O,
    input: &SolveInput,
    opts: &SolveOptions,
    gamma: f64,
    name: &'static str,
) -> Result<(SolveOutput, SolveReport, LpBall)> {
    let ball = LpBall::new(opts.p, gamma)?;
    let lipschitz = obj.lipschitz();
    let mut cfg = SolverConfig::for_lipschitz(lipschitz);
    if let AutoOr::Value(beta) = opts.beta {
        cfg.beta = beta;
    }
    cfg.eta = opts.eta;
    if let Some(it) = opts.max_iter {
        cfg.max_iter = it;
    }
    let x0 = match &input.x0 {
        Some(v) => Array1::from(v.clone()),
        None => Array1::zeros(obj.dim()),
    };
    let report = HybridSolver::new(obj, ball, cfg)?.solve(x0.view())?;
    let x = report.x_final.view();
    let norm = lp_norm_p(x, opts.p);
    let multiplier = report
        .xi_final
        .unwrap_or_else(|| fit_multiplier(x, obj.gradient(x).view(), opts.p));
    let out = SolveOutput {
        objective: name,
        p: opts.p,
        gamma,
        lipschitz,
        beta: cfg.beta,
        eta: cfg.eta,
        reason: report.reason,
        iterations: report.iterations,
        f_initial: report.f_initial,
        f_final: report.f_final,
        lp_norm_p: norm,
        support_size: x.iter().filter(|v| **v != 0.0).count(),
        r_fea: (norm - gamma).abs() / x.len() as f64,
        r_opt: None,
        multiplier,
        residual_s2: report.residual_s2,
        fw_gap_final: report.fw_gap_final,
        wall_time_s: report.wall_time.as_secs_f64(),
        x: x.to_vec(),
        trace: opts.trace.then(|| report.trace.clone()),
    };
    Ok((out, report, ball))
}
