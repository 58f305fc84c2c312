//! The partially sparse recovery pipeline.
//!
//! The unknown splits as `x = (x1, x2)` with `x1` sparse and `x2` free, and
//! the measurement matrix splits columnwise as `A = (A1, A2)`. Two routes to
//! the same `x1`:
//!
//! - **projected**: annihilate the dense block with the orthogonal projector
//!   `P` onto `range(A2)^⊥`, recover `x1` from `(P A1) x1 ≈ P y`, then
//!   back-solve `A2 x2 = y - A1 x1` in the least-squares sense;
//! - **direct**: minimize the l1 norm of the `x1` coordinates over the full
//!   variable with zero weight on the `x2` block.
//!
//! The feasible `x1` sets of the two formulations coincide, so the optimal
//! objectives agree and, whenever the reduced optimum is unique, so do the
//! recovered `x1` blocks. Route equivalence is the main cross-check used by
//! the test suite.

use crate::error::{Error, Result};
use crate::linalg::{build_projector, norm2, qr_factor_auto, sub, DenseMatrix, Projector};
use crate::solvers::{
    admm_bpdn, simplex_l1, SolveMethod, SolveOptions, SolveReport, SolveStatus,
};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Measurement matrix `A = (A1, A2)` split at column `N - r`, with the
/// dense-block column count `r`, plus lazily built reduction state.
///
/// `A2` (the last `r` columns) must have full column rank; this is validated
/// at construction. The projector and the reduced matrix `P A1` are built on
/// first use and cached; the type is immutable afterwards, so sharing across
/// threads is safe.
#[derive(Debug)]
pub struct PartitionedMatrix {
    a: DenseMatrix,
    r: usize,
    a1: DenseMatrix,
    a2: DenseMatrix,
    projector: OnceLock<Projector>,
    pa1: OnceLock<DenseMatrix>,
}

impl PartitionedMatrix {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }

    /// Dense-block size `r`.
    pub fn split(&self) -> usize {
        self.r
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    /// The sparse block `A1` (first `N - r` columns).
    pub fn a1(&self) -> &DenseMatrix {
        &self.a1
    }

    /// The dense block `A2` (last `r` columns).
    pub fn a2(&self) -> &DenseMatrix {
        &self.a2
    }

    /// Orthogonal projector onto `range(A2)^⊥`, built once on demand.
    pub fn projector(&self) -> &Projector {
        self.projector.get_or_init(|| {
            build_projector(&self.a2).expect("column rank validated at construction")
        })
    }

    /// The reduced matrix `P A1`, built once on demand.
    pub fn projected_a1(&self) -> &DenseMatrix {
        self.pa1.get_or_init(|| {
            self.projector()
                .matrix()
                .matmul(&self.a1)
                .expect("dimensions fixed at construction")
        })
    }
}

/// A split unknown: sparse block `x1`, dense block `x2`, and the sparsity
/// the `x1` block is declared to carry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartiallySparseSignal {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub declared_sparsity: usize,
}

impl PartiallySparseSignal {
    /// Concatenated full vector `(x1, x2)`.
    pub fn full(&self) -> Vec<f64> {
        let mut v = self.x1.clone();
        v.extend_from_slice(&self.x2);
        v
    }
}

/// Which formulation produced a [`PartialSolution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    Projected,
    Direct,
}

/// Output of a partial recovery: both blocks, the solver report for the
/// `x1` problem, and the residual of the `x2` back-solve.
#[derive(Debug, Clone)]
pub struct PartialSolution {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub x1_report: SolveReport,
    /// `||A2 x2 - (y - A1 x1)||_2`.
    pub x2_residual: f64,
    pub route: Route,
}

/// Split `A` at column `N - r` and validate that the dense block has full
/// column rank. `r = 0` degenerates to the classical setting (the projector
/// is the identity).
pub fn split_matrix(a: &DenseMatrix, r: usize) -> Result<PartitionedMatrix> {
    let k = a.rows();
    let n = a.cols();
    if r > k.min(n) {
        return Err(Error::DomainError(format!(
            "split size {r} exceeds min(rows, cols) = {}",
            k.min(n)
        )));
    }
    let a1 = a.columns(0, n - r);
    let a2 = a.columns(n - r, r);
    if r > 0 {
        let f = qr_factor_auto(&a2);
        if f.rank < r {
            return Err(Error::RankDeficient {
                rank: f.rank,
                cols: r,
                context: "dense block A2",
            });
        }
    }
    Ok(PartitionedMatrix {
        a: a.clone(),
        r,
        a1,
        a2,
        projector: OnceLock::new(),
        pa1: OnceLock::new(),
    })
}

/// Reduce the joint problem to the classical one: returns `(P A1, P y)`.
pub fn reduce_problem(part: &PartitionedMatrix, y: &[f64]) -> Result<(DenseMatrix, Vec<f64>)> {
    if y.len() != part.rows() {
        return Err(Error::DimensionMismatch {
            expected: part.rows(),
            got: y.len(),
            context: "measurement vector",
        });
    }
    Ok((part.projected_a1().clone(), part.projector().apply(y)?))
}

fn solve_x1(
    m: &DenseMatrix,
    rhs: &[f64],
    eta: f64,
    weights: &[f64],
    opts: &SolveOptions,
) -> Result<SolveReport> {
    let use_simplex = match opts.method {
        SolveMethod::Simplex => true,
        SolveMethod::Splitting => false,
        SolveMethod::Auto => eta == 0.0,
    };
    if use_simplex {
        if eta > 0.0 {
            return Err(Error::DomainError(
                "simplex handles equality constraints only; use the splitting method for eta > 0"
                    .into(),
            ));
        }
        simplex_l1(m, rhs, weights)
    } else if eta == 0.0 {
        let mut o = opts.clone();
        o.weights = Some(weights.to_vec());
        crate::solvers::admm_basis_pursuit(m, rhs, &o)
    } else {
        let mut o = opts.clone();
        o.weights = Some(weights.to_vec());
        admm_bpdn(m, rhs, eta, &o)
    }
}

/// Recover `(x1, x2)` through the projected formulation: solve the reduced
/// problem for `x1`, then back-solve the dense block.
///
/// With `eta = 0` the reduced problem is solved exactly by simplex (unless
/// the options force splitting); with `eta > 0` it is the ball-constrained
/// splitting solver. The back-solve `A2 x2 = y - A1 x1` is exact for
/// noiseless data and least-squares otherwise.
pub fn recover_projected(
    part: &PartitionedMatrix,
    y: &[f64],
    eta: f64,
    opts: &SolveOptions,
) -> Result<PartialSolution> {
    if !(eta >= 0.0) || !eta.is_finite() {
        return Err(Error::DomainError(format!(
            "noise radius must be nonnegative, got {eta}"
        )));
    }
    let (pa1, py) = reduce_problem(part, y)?;
    let n1 = pa1.cols();
    if part.split() == part.rows() {
        log::warn!(
            "split size equals the row count: the projector is zero and x1 cannot be recovered"
        );
    }
    let weights = opts.weights_or_ones(n1);
    let x1_report = solve_x1(&pa1, &py, eta, &weights, opts)?;
    if x1_report.status == SolveStatus::Infeasible {
        return Err(Error::Infeasible);
    }
    let x1 = x1_report.x.clone();

    let rhs = sub(y, &part.a1().matvec(&x1)?);
    let x2 = part.projector().solve_dense_block(&rhs)?;
    let x2_residual = norm2(&sub(&part.a2().matvec(&x2)?, &rhs));
    Ok(PartialSolution {
        x1,
        x2,
        x1_report,
        x2_residual,
        route: Route::Projected,
    })
}

/// Recover `(x1, x2)` through the direct formulation: one solve over the
/// full variable with unit weights on `x1` and zero weights on `x2`.
pub fn recover_direct(
    part: &PartitionedMatrix,
    y: &[f64],
    eta: f64,
    opts: &SolveOptions,
) -> Result<PartialSolution> {
    if !(eta >= 0.0) || !eta.is_finite() {
        return Err(Error::DomainError(format!(
            "noise radius must be nonnegative, got {eta}"
        )));
    }
    let n = part.cols();
    let r = part.split();
    let n1 = n - r;
    let mut weights = opts.weights_or_ones(n1);
    weights.resize(n, 0.0);

    let report = solve_x1(part.matrix(), y, eta, &weights, opts)?;
    if report.status == SolveStatus::Infeasible {
        return Err(Error::Infeasible);
    }
    let x1 = report.x[..n1].to_vec();
    let x2 = report.x[n1..].to_vec();
    let rhs = sub(y, &part.a1().matvec(&x1)?);
    let x2_residual = norm2(&sub(&part.a2().matvec(&x2)?, &rhs));
    Ok(PartialSolution {
        x1,
        x2,
        x1_report: report,
        x2_residual,
        route: Route::Direct,
    })
}
