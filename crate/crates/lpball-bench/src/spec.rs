//! Experiment descriptions and per-trial outcomes.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    LpProjection,
    SparseRecovery,
}

/// How the ball radius is chosen for each instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaRule {
    /// `gamma = fraction * ||y||_p^p`.
    FractionOfNorm(f64),
    /// `gamma = s`, the true sparsity level.
    EqualsS,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Hybrid,
    L1gpm,
    Iht,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [SolverKind::Hybrid, SolverKind::L1gpm, SolverKind::Iht];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Hybrid => "hybrid",
            SolverKind::L1gpm => "l1gpm",
            SolverKind::Iht => "iht",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown solver `{s}` (expected hybrid, l1gpm or iht)"))
    }
}

/// A full experiment. `n` and `m` are sweeps; recovery uses a single `n`
/// and a single `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub n: Vec<usize>,
    #[serde(default)]
    pub m: Vec<usize>,
    #[serde(default)]
    pub s: Option<usize>,
    pub p_values: Vec<f64>,
    pub gamma_rule: GammaRule,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_solvers")]
    pub solvers: Vec<SolverKind>,
}

fn default_solvers() -> Vec<SolverKind> {
    SolverKind::ALL.to_vec()
}

pub const DEFAULT_PROJECTION_TRIALS: usize = 50;
pub const DEFAULT_RECOVERY_TRIALS: usize = 10;
pub const DEFAULT_GAMMA_FRACTION: f64 = 0.01;

/// `m = 50, 100, ..., 1000`.
pub fn default_m_grid() -> Vec<usize> {
    (1..=20).map(|k| 50 * k).collect()
}

impl ExperimentSpec {
    pub fn projection(n: Vec<usize>, p_values: Vec<f64>, trials: usize, seed: u64) -> Self {
        Self {
            kind: ExperimentKind::LpProjection,
            n,
            m: Vec::new(),
            s: None,
            p_values,
            gamma_rule: GammaRule::FractionOfNorm(DEFAULT_GAMMA_FRACTION),
            trials,
            seed,
            solvers: vec![SolverKind::Hybrid],
        }
    }

    pub fn recovery(
        n: usize,
        s: usize,
        m: Vec<usize>,
        p: f64,
        solvers: Vec<SolverKind>,
        trials: usize,
        seed: u64,
    ) -> Self {
        Self {
            kind: ExperimentKind::SparseRecovery,
            n: vec![n],
            m,
            s: Some(s),
            p_values: vec![p],
            gamma_rule: GammaRule::EqualsS,
            trials,
            seed,
            solvers,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(BenchError::InvalidSpec(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.n.is_empty() || self.n.contains(&0) {
            return bad("n must be a non-empty list of positive sizes".into());
        }
        if self.p_values.is_empty() {
            return bad("p_values must not be empty".into());
        }
        if let Some(p) = self.p_values.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
            return bad(format!("p must lie in (0, 1), got {p}"));
        }
        match self.kind {
            ExperimentKind::LpProjection => {
                match self.gamma_rule {
                    GammaRule::FractionOfNorm(f) if f > 0.0 && f.is_finite() => {}
                    rule => {
                        return bad(format!(
                            "projection needs a positive fraction_of_norm, got {rule:?}"
                        ))
                    }
                }
                if !self.m.is_empty() || self.s.is_some() {
                    return bad("m and s apply to recovery experiments only".into());
                }
            }
            ExperimentKind::SparseRecovery => {
                if self.gamma_rule != GammaRule::EqualsS {
                    return bad("recovery uses gamma_rule = \"equals_s\"".into());
                }
                let [n] = self.n[..] else {
                    return bad("recovery takes a single n".into());
                };
                if self.p_values.len() != 1 {
                    return bad("recovery takes a single p".into());
                }
                match self.s {
                    Some(s) if s >= 1 && s <= n => {}
                    s => return bad(format!("need 1 <= s <= n, got s = {s:?}")),
                }
                if self.m.is_empty() || self.m.contains(&0) {
                    return bad("m must be a non-empty list of positive sizes".into());
                }
                if self.solvers.is_empty() {
                    return bad("no solvers selected".into());
                }
            }
        }
        Ok(())
    }
}

/// Outcome of one successful solve.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub objective: f64,
    /// `|c(x) - r| / n` against the solver's own constraint: lp mass for the
    /// hybrid solver, l1 norm for the l1 baseline, support size for IHT.
    pub r_fea: f64,
    pub wall_time: Duration,
    pub iterations: usize,
    /// Recovery only.
    pub rel_error: Option<f64>,
    /// Recovery only.
    pub success: Option<bool>,
    /// Recovery only: `(threshold, count)` pairs.
    pub false_nonzeros: Vec<(f64, usize)>,
}

/// One row of an experiment: a trial identity plus its outcome or the
/// solver error.
#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub solver: SolverKind,
    pub n: usize,
    pub m: Option<usize>,
    pub p: f64,
    pub trial: usize,
    pub outcome: std::result::Result<TrialResult, String>,
}

impl Trial {
    pub fn ok(&self) -> Option<&TrialResult> {
        self.outcome.as_ref().ok()
    }

    pub(crate) fn sort_key(a: &Trial, b: &Trial) -> std::cmp::Ordering {
        (a.solver, a.n, a.m)
            .cmp(&(b.solver, b.n, b.m))
            .then(a.p.total_cmp(&b.p))
            .then(a.trial.cmp(&b.trial))
    }
}

pub(crate) fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

pub(crate) fn median(mut values: Vec<f64>) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    })
}
