//! Weighted l1-minimization engines.
//!
//! Two routes to the same optimum, used to cross-check each other:
//! an exact two-phase simplex on the standard split-variable linear program,
//! and operator-splitting iterations for the equality-constrained and
//! ball-constrained (noisy) formulations.

mod admm;
mod simplex;

pub use admm::{admm_basis_pursuit, admm_bpdn};
pub use simplex::{simplex_l1, solve_standard_form, LpSolution};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// How an equality-constrained recovery should be solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SolveMethod {
    /// Simplex for equality constraints, splitting for ball constraints.
    #[default]
    Auto,
    Simplex,
    Splitting,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveOptions {
    pub max_iters: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Splitting step parameter (rho).
    pub penalty: f64,
    /// Per-coordinate nonnegative objective weights; `None` means all ones.
    pub weights: Option<Vec<f64>>,
    /// Residual-balancing penalty adaptation; off by default so that runs
    /// are reproducible step for step.
    pub adaptive_penalty: bool,
    pub method: SolveMethod,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iters: 20_000,
            abs_tol: 1e-8,
            rel_tol: 1e-6,
            penalty: 1.0,
            weights: None,
            adaptive_penalty: false,
            method: SolveMethod::Auto,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::DomainError("max_iters must be at least 1".into()));
        }
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::DomainError("tolerances must be positive".into()));
        }
        if !(self.penalty > 0.0) || !self.penalty.is_finite() {
            return Err(Error::DomainError("penalty must be positive".into()));
        }
        if let Some(w) = &self.weights {
            if w.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: w.len(),
                    context: "objective weights",
                });
            }
            if w.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::DomainError(
                    "weights must be finite and nonnegative".into(),
                ));
            }
        }
        Ok(())
    }

    /// Weights materialized to a vector of length `n`.
    pub fn weights_or_ones(&self, n: usize) -> Vec<f64> {
        self.weights.clone().unwrap_or_else(|| vec![1.0; n])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Converged,
    MaxIters,
    Infeasible,
}

/// Solver output: the point, its recomputed weighted l1 objective, and
/// termination metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub x: Vec<f64>,
    pub objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub status: SolveStatus,
}

/// Weighted l1 objective recomputed from the point itself.
pub fn weighted_l1(x: &[f64], weights: &[f64]) -> f64 {
    x.iter().zip(weights).map(|(v, w)| w * v.abs()).sum()
}

/// Proximal map of the weighted l1 norm: elementwise shrinkage toward zero.
pub fn soft_threshold(v: &[f64], t: &[f64]) -> Result<Vec<f64>> {
    if v.len() != t.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            got: t.len(),
            context: "soft threshold",
        });
    }
    if t.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::DomainError(
            "thresholds must be finite and nonnegative".into(),
        ));
    }
    Ok(v.iter()
        .zip(t)
        .map(|(&vi, &ti)| vi.signum() * (vi.abs() - ti).max(0.0))
        .collect())
}
