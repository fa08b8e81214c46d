use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tunables of the hybrid solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Armijo parameter in (0, 1); also scales the Frank-Wolfe trial step.
    pub eta: f64,
    /// Projection stepsize, must satisfy `0 < beta < 1/L`.
    pub beta: f64,
    /// `| ||x||_p^p - gamma | <= boundary_tol` counts as on the boundary.
    pub boundary_tol: f64,
    /// Boundary termination: `||x_{k+1} - x_k||_2 <= step_tol`.
    pub step_tol: f64,
    /// Interior termination: Frank-Wolfe gap `<= gap_tol`.
    pub gap_tol: f64,
    /// Bisection stops once `|phi(alpha)| <= bisection_tol`.
    pub bisection_tol: f64,
    pub max_iter: usize,
    /// Entries with magnitude at or below this are snapped to zero.
    pub zero_tol: f64,
}

impl SolverConfig {
    pub const DEFAULT_ETA: f64 = 0.5;
    pub const DEFAULT_MAX_ITER: usize = 100_000;

    /// Defaults with the given projection stepsize.
    pub fn with_beta(beta: f64) -> Self {
        Self {
            eta: Self::DEFAULT_ETA,
            beta,
            boundary_tol: 1e-8,
            step_tol: 1e-5,
            gap_tol: 1e-5,
            bisection_tol: 1e-8,
            max_iter: Self::DEFAULT_MAX_ITER,
            zero_tol: 1e-14,
        }
    }

    /// Defaults with `beta = 0.5 / lipschitz`.
    pub fn for_lipschitz(lipschitz: f64) -> Self {
        Self::with_beta(0.5 / lipschitz)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::InvalidInput(format!(
                "eta must lie in (0, 1), got {}",
                self.eta
            )));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        let tols = [
            ("boundary_tol", self.boundary_tol),
            ("step_tol", self.step_tol),
            ("gap_tol", self.gap_tol),
            ("bisection_tol", self.bisection_tol),
            ("zero_tol", self.zero_tol),
        ];
        for (name, v) in tols {
            if !(v > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = SolverConfig::for_lipschitz(2.0);
        assert_eq!(cfg.beta, 0.25);
        assert_eq!(cfg.eta, 0.5);
        assert_eq!(cfg.boundary_tol, 1e-8);
        assert_eq!(cfg.step_tol, 1e-5);
        assert_eq!(cfg.gap_tol, 1e-5);
        assert_eq!(cfg.max_iter, 100_000);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn validation() {
        let mut cfg = SolverConfig::with_beta(0.5);
        cfg.eta = 1.0;
        assert!(cfg.validate().is_err());
        let mut cfg = SolverConfig::with_beta(0.0);
        assert!(cfg.validate().is_err());
        cfg.beta = 0.1;
        cfg.gap_tol = 0.0;
        assert!(cfg.validate().is_err());
        cfg.gap_tol = 1e-5;
        cfg.max_iter = 0;
        assert!(cfg.validate().is_err());
    }
}
