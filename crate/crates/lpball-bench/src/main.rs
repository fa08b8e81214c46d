use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lpball_bench::output::{save_projection, save_recovery};
use lpball_bench::recovery::FALSE_NONZERO_THRESHOLDS;
use lpball_bench::solve_io::{run_solve, AutoOr, ObjectiveKind, SolveInput, SolveOptions};
use lpball_bench::spec::{default_m_grid, DEFAULT_PROJECTION_TRIALS, DEFAULT_RECOVERY_TRIALS};
use lpball_bench::{
    run_projection_experiment, run_recovery_experiment, ExperimentKind, ExperimentSpec,
    ProjectionReport, RecoveryReport, Result, SolverKind,
};

/// Smooth minimization over lp balls, 0 < p < 1.
#[derive(Parser)]
#[command(name = "lpball", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem read from a JSON file.
    Solve(SolveArgs),
    /// Run a seeded experiment and write CSV tables.
    #[command(subcommand)]
    Bench(Bench),
}

#[derive(Args)]
struct SolveArgs {
    /// `proj` for 0.5||x - y||^2, `ls` for 0.5||Ax - b||^2.
    #[arg(long)]
    objective: ObjectiveKind,
    #[arg(long)]
    p: f64,
    /// Radius, or `auto` (0.01 ||y||_p^p for proj, `s` from the input for ls).
    #[arg(long, default_value = "auto")]
    gamma: AutoOr,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    eta: f64,
    /// Projection stepsize, or `auto` for 0.5 / L.
    #[arg(long, default_value = "auto")]
    beta: AutoOr,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Include the per-iteration trace in the output.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long)]
    out: PathBuf,
    /// Leave the time columns empty so output is byte-identical across runs.
    #[arg(long)]
    omit_timing: bool,
}

#[derive(Subcommand)]
enum Bench {
    /// Project Gaussian points onto lp balls of radius 0.01 ||y||_p^p.
    Projection {
        #[arg(long, value_delimiter = ',', default_values_t = [100, 1000, 10000, 100000])]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.8, 0.4])]
        p: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_PROJECTION_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Recover s-sparse signals from m noisy Gaussian measurements.
    Recovery {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        s: usize,
        /// Defaults to 50, 100, ..., 1000.
        #[arg(long, value_delimiter = ',')]
        m: Vec<usize>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, value_delimiter = ',', default_values_t = SolverKind::ALL)]
        solvers: Vec<SolverKind>,
        #[arg(long, default_value_t = DEFAULT_RECOVERY_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the experiment described by a TOML file.
    Config {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |v| format!("{v:.4}"))
}

fn print_projection(report: &ProjectionReport) {
    for s in &report.summary {
        println!(
            "n={} p={} trials={} failed={} mean_objective={} mean_r_fea={} mean_time_s={} mean_iterations={}",
            s.n,
            s.p,
            s.trials,
            s.failed,
            fmt_opt(s.mean_objective),
            s.mean_r_fea.map_or_else(|| "-".into(), |v| format!("{v:.3e}")),
            fmt_opt(s.mean_time_s),
            fmt_opt(s.mean_iterations),
        );
    }
}

fn print_recovery(report: &RecoveryReport) {
    for r in &report.curve {
        println!(
            "{} m={} success_rate={} ({}/{}, {} failed)",
            r.solver, r.m, r.rate, r.successes, r.trials, r.failed
        );
    }
    let mut solvers: Vec<SolverKind> = report.curve.iter().map(|r| r.solver).collect();
    solvers.dedup();
    for solver in solvers {
        for t in FALSE_NONZERO_THRESHOLDS {
            println!(
                "{solver} false nonzeros above {t:e}: median {}",
                report
                    .median_false_nonzeros(solver, t)
                    .map_or_else(|| "-".into(), |v| v.to_string())
            );
        }
    }
}

fn run_spec(spec: &ExperimentSpec, out: &std::path::Path, timing: bool) -> Result<Vec<PathBuf>> {
    match spec.kind {
        ExperimentKind::LpProjection => {
            let report = run_projection_experiment(spec)?;
            print_projection(&report);
            save_projection(out, spec, &report, timing)
        }
        ExperimentKind::SparseRecovery => {
            let report = run_recovery_experiment(spec)?;
            print_recovery(&report);
            save_recovery(out, spec, &report, timing)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let written = match cli.command {
        Command::Solve(a) => {
            let input: SolveInput = serde_json::from_str(&std::fs::read_to_string(&a.input)?)?;
            let opts = SolveOptions {
                objective: a.objective,
                p: a.p,
                gamma: a.gamma,
                eta: a.eta,
                beta: a.beta,
                max_iter: a.max_iter,
                trace: a.trace,
            };
            let out = run_solve(&input, &opts)?;
            println!(
                "{:?} after {} iterations: f = {}, ||x||_p^p = {} (gamma = {})",
                out.reason, out.iterations, out.f_final, out.lp_norm_p, out.gamma
            );
            std::fs::write(&a.out, serde_json::to_string_pretty(&out)?)?;
            vec![a.out]
        }
        Command::Bench(Bench::Projection {
            n,
            p,
            trials,
            seed,
            output,
        }) => {
            let spec = ExperimentSpec::projection(n, p, trials, seed);
            run_spec(&spec, &output.out, !output.omit_timing)?
        }
        Command::Bench(Bench::Recovery {
            n,
            s,
            m,
            p,
            solvers,
            trials,
            seed,
            output,
        }) => {
            let m = if m.is_empty() { default_m_grid() } else { m };
            let spec = ExperimentSpec::recovery(n, s, m, p, solvers, trials, seed);
            run_spec(&spec, &output.out, !output.omit_timing)?
        }
        Command::Bench(Bench::Config { file, output }) => {
            let spec = ExperimentSpec::load(&file)?;
            run_spec(&spec, &output.out, !output.omit_timing)?
        }
    };
    for path in written {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
