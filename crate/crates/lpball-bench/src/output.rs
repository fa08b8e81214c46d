//! CSV tables. Every file starts with `# key: value` metadata lines; read
//! them back with `csv::ReaderBuilder::comment(Some(b'#'))`.
//!
//! Wall-clock times are the only nondeterministic fields. With `timing`
//! off they are left empty and the output is byte-identical across runs of
//! the same spec.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use lpball::{BaselineConfig, SolverConfig};

use crate::data::{NOISE_VARIANCE, PRNG_ID};
use crate::projection::ProjectionReport;
use crate::recovery::{RecoveryReport, SUCCESS_TOL};
use crate::spec::{ExperimentKind, ExperimentSpec, GammaRule, Trial};
use crate::Result;

fn join<T: ToString>(values: &[T]) -> String {
    values
        .iter()
        .map(T::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub fn metadata(spec: &ExperimentSpec, timing: bool) -> Vec<(&'static str, String)> {
    let cfg = SolverConfig::with_beta(1.0);
    let base = BaselineConfig::for_lipschitz(1.0);
    let mut meta = vec![
        ("lpball_version", env!("CARGO_PKG_VERSION").to_string()),
        ("kind", match spec.kind {
            ExperimentKind::LpProjection => "lp_projection".into(),
            ExperimentKind::SparseRecovery => "sparse_recovery".into(),
        }),
        ("seed", spec.seed.to_string()),
        ("prng", PRNG_ID.to_string()),
        ("trials", spec.trials.to_string()),
        ("n", join(&spec.n)),
        ("p", join(&spec.p_values)),
        ("gamma_rule", match spec.gamma_rule {
            GammaRule::FractionOfNorm(f) => format!("fraction_of_norm={f}"),
            GammaRule::EqualsS => "equals_s".into(),
        }),
        (
            "hybrid",
            format!(
                "x0=0 eta={} beta=0.5/L boundary_tol={:e} step_tol={:e} gap_tol={:e} bisection_tol={:e} zero_tol={:e} max_iter={}",
                cfg.eta, cfg.boundary_tol, cfg.step_tol, cfg.gap_tol, cfg.bisection_tol, cfg.zero_tol, cfg.max_iter
            ),
        ),
    ];
    if spec.kind == ExperimentKind::SparseRecovery {
        meta.extend([
            ("m", join(&spec.m)),
            ("s", spec.s.map_or_else(String::new, |s| s.to_string())),
            ("solvers", join(&spec.solvers)),
            (
                "baselines",
                format!(
                    "x0=0 stepsize=0.5/L step_tol={:e} max_iter={}",
                    base.step_tol, base.max_iter
                ),
            ),
            (
                "lipschitz",
                "1.01 * power-method estimate of lambda_max(A^T A)".into(),
            ),
            ("noise_variance", format!("{NOISE_VARIANCE:e}")),
            ("success_tol", format!("{SUCCESS_TOL:e}")),
        ]);
    } else {
        meta.push(("lipschitz", "1".into()));
    }
    meta.push((
        "time_s",
        if timing {
            "wall-clock seconds per solve, data generation excluded".into()
        } else {
            "omitted".into()
        },
    ));
    meta
}

fn table<W: Write, R: Serialize>(
    mut out: W,
    meta: &[(&'static str, String)],
    rows: impl IntoIterator<Item = R>,
) -> Result<()> {
    for (k, v) in meta {
        writeln!(out, "# {k}: {v}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn status(t: &Trial) -> String {
    match &t.outcome {
        Ok(_) => "ok".into(),
        Err(e) => format!("failed: {e}"),
    }
}

#[derive(Serialize)]
struct ProjectionRow {
    solver: &'static str,
    n: usize,
    p: f64,
    trial: usize,
    objective: Option<f64>,
    r_fea: Option<f64>,
    time_s: Option<f64>,
    iterations: Option<usize>,
    status: String,
}

/// Per-trial rows: `solver,n,p,trial,objective,r_fea,time_s,iterations,status`.
pub fn write_projection_trials<W: Write>(
    out: W,
    spec: &ExperimentSpec,
    report: &ProjectionReport,
    timing: bool,
) -> Result<()> {
    let rows = report.trials.iter().map(|t| {
        let r = t.ok();
        ProjectionRow {
            solver: t.solver.name(),
            n: t.n,
            p: t.p,
            trial: t.trial,
            objective: r.map(|r| r.objective),
            r_fea: r.map(|r| r.r_fea),
            time_s: r.filter(|_| timing).map(|r| r.wall_time.as_secs_f64()),
            iterations: r.map(|r| r.iterations),
            status: status(t),
        }
    });
    table(out, &metadata(spec, timing), rows)
}

#[derive(Serialize)]
struct ProjectionSummaryRow {
    solver: &'static str,
    n: usize,
    p: f64,
    trials: usize,
    failed: usize,
    mean_objective: Option<f64>,
    mean_r_fea: Option<f64>,
    mean_time_s: Option<f64>,
    mean_iterations: Option<f64>,
}

pub fn write_projection_summary<W: Write>(
    out: W,
    spec: &ExperimentSpec,
    report: &ProjectionReport,
    timing: bool,
) -> Result<()> {
    let rows = report.summary.iter().map(|s| ProjectionSummaryRow {
        solver: s.solver.name(),
        n: s.n,
        p: s.p,
        trials: s.trials,
        failed: s.failed,
        mean_objective: s.mean_objective,
        mean_r_fea: s.mean_r_fea,
        mean_time_s: s.mean_time_s.filter(|_| timing),
        mean_iterations: s.mean_iterations,
    });
    table(out, &metadata(spec, timing), rows)
}

#[derive(Serialize)]
struct RecoveryRow {
    solver: &'static str,
    m: Option<usize>,
    trial: usize,
    rel_error: Option<f64>,
    success: bool,
    time_s: Option<f64>,
    iterations: Option<usize>,
    status: String,
}

/// Per-trial rows: `solver,m,trial,rel_error,success,time_s,iterations,status`.
pub fn write_recovery_trials<W: Write>(
    out: W,
    spec: &ExperimentSpec,
    report: &RecoveryReport,
    timing: bool,
) -> Result<()> {
    let rows = report.trials.iter().map(|t| {
        let r = t.ok();
        RecoveryRow {
            solver: t.solver.name(),
            m: t.m,
            trial: t.trial,
            rel_error: r.and_then(|r| r.rel_error),
            success: r.and_then(|r| r.success).unwrap_or(false),
            time_s: r.filter(|_| timing).map(|r| r.wall_time.as_secs_f64()),
            iterations: r.map(|r| r.iterations),
            status: status(t),
        }
    });
    table(out, &metadata(spec, timing), rows)
}

#[derive(Serialize)]
struct RateRow {
    solver: &'static str,
    m: usize,
    trials: usize,
    failed: usize,
    successes: usize,
    success_rate: f64,
}

/// Success probability per solver and `m`.
pub fn write_success_curve<W: Write>(
    out: W,
    spec: &ExperimentSpec,
    report: &RecoveryReport,
    timing: bool,
) -> Result<()> {
    let rows = report.curve.iter().map(|r| RateRow {
        solver: r.solver.name(),
        m: r.m,
        trials: r.trials,
        failed: r.failed,
        successes: r.successes,
        success_rate: r.rate,
    });
    table(out, &metadata(spec, timing), rows)
}

#[derive(Serialize)]
struct FalseNonzeroCsvRow {
    solver: &'static str,
    threshold: f64,
    trial: usize,
    count: usize,
}

/// `solver,threshold,trial,count` for successful trials at the largest `m`.
pub fn write_false_nonzeros<W: Write>(
    out: W,
    spec: &ExperimentSpec,
    report: &RecoveryReport,
    timing: bool,
) -> Result<()> {
    let rows = report.false_nonzeros.iter().map(|r| FalseNonzeroCsvRow {
        solver: r.solver.name(),
        threshold: r.threshold,
        trial: r.trial,
        count: r.count,
    });
    table(out, &metadata(spec, timing), rows)
}

/// `dir/name.csv` with `suffix` -> `dir/name_suffix.csv`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("results");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Writes the per-trial table to `out` and the means next to it. Returns
/// the paths written.
pub fn save_projection(
    out: &Path,
    spec: &ExperimentSpec,
    report: &ProjectionReport,
    timing: bool,
) -> Result<Vec<PathBuf>> {
    let summary = sibling(out, "summary");
    write_projection_trials(create(out)?, spec, report, timing)?;
    write_projection_summary(create(&summary)?, spec, report, timing)?;
    Ok(vec![out.to_path_buf(), summary])
}

/// Writes the per-trial table to `out`, plus the success curve and the
/// false-nonzero table next to it. Returns the paths written.
pub fn save_recovery(
    out: &Path,
    spec: &ExperimentSpec,
    report: &RecoveryReport,
    timing: bool,
) -> Result<Vec<PathBuf>> {
    let rates = sibling(out, "rates");
    let fnz = sibling(out, "false_nonzeros");
    write_recovery_trials(create(out)?, spec, report, timing)?;
    write_success_curve(create(&rates)?, spec, report, timing)?;
    write_false_nonzeros(create(&fnz)?, spec, report, timing)?;
    Ok(vec![out.to_path_buf(), rates, fnz])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::run_projection_experiment;

    fn to_string(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> String {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn sibling_paths() {
        assert_eq!(
            sibling(Path::new("out/curve.csv"), "rates"),
            PathBuf::from("out/curve_rates.csv")
        );
        assert_eq!(
            sibling(Path::new("r"), "summary"),
            PathBuf::from("r_summary.csv")
        );
    }

    #[test]
    fn projection_csv_layout() {
        let spec = ExperimentSpec::projection(vec![20], vec![0.5], 2, 4);
        let rep = run_projection_experiment(&spec).unwrap();
        let text = to_string(|b| write_projection_trials(b, &spec, &rep, false));
        let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(
            header,
            "solver,n,p,trial,objective,r_fea,time_s,iterations,status"
        );
        assert!(text.contains("# seed: 4\n"));
        assert!(text.contains("# prng: ChaCha20Rng"));
        let data: Vec<&str> = text.lines().filter(|l| l.starts_with("hybrid")).collect();
        assert_eq!(data.len(), 2);
        // empty time column
        assert_eq!(data[0].split(',').nth(6), Some(""));
        assert!(data[0].ends_with(",ok"));
    }

    #[test]
    fn timing_column_is_filled_when_requested() {
        let spec = ExperimentSpec::projection(vec![20], vec![0.5], 1, 4);
        let rep = run_projection_experiment(&spec).unwrap();
        let text = to_string(|b| write_projection_trials(b, &spec, &rep, true));
        let row = text.lines().find(|l| l.starts_with("hybrid")).unwrap();
        let t: f64 = row.split(',').nth(6).unwrap().parse().unwrap();
        assert!(t >= 0.0);
    }

    #[test]
    fn deterministic_output_is_byte_identical() {
        let spec = ExperimentSpec::projection(vec![25, 50], vec![0.4, 0.8], 3, 8);
        let a = to_string(|b| {
            write_projection_trials(b, &spec, &run_projection_experiment(&spec)?, false)
        });
        let b = to_string(|b| {
            write_projection_trials(b, &spec, &run_projection_experiment(&spec)?, false)
        });
        assert_eq!(a, b);
    }
}
