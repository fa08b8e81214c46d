//! Experiment harness for the `lpball` solvers.
//!
//! * [`data`]: seeded Gaussian instances;
//! * [`projection`], [`recovery`]: the two studies;
//! * [`output`]: CSV tables with a metadata header;
//! * [`solve_io`]: JSON input and output for single solves.

pub mod data;
mod error;
pub mod output;
pub mod projection;
pub mod recovery;
pub mod solve_io;
pub mod spec;

pub use error::{BenchError, Result};
pub use projection::{run_projection_experiment, ProjectionReport, ProjectionSummary};
pub use recovery::{run_recovery_experiment, RecoveryReport, SuccessRate};
pub use spec::{ExperimentKind, ExperimentSpec, GammaRule, SolverKind, Trial, TrialResult};
