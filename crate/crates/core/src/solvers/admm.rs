//! Operator-splitting solvers for equality- and ball-constrained weighted
//! l1 minimization.

use super::{soft_threshold, weighted_l1, SolveOptions, SolveReport, SolveStatus};
use crate::error::{Error, Result};
use crate::linalg::{
    add, consistent_solve, dot, norm2, null_space_basis_auto, qr_factor_auto, scale, sub,
    DenseMatrix,
};

const EQUALITY_FEAS_REL_TOL: f64 = 1e-6;
// Restored iterates sit strictly inside the constraint ball.
const BALL_INTERIOR_MARGIN: f64 = 1e-9;

/// `min Σ wᵢ|xᵢ|  s.t.  A x = y` by two-block splitting.
///
/// The x-update is the orthogonal projection onto the constraint affine set,
/// precomputed from one QR factorization; the z-update is the shrinkage step.
/// Iterates are therefore feasible at every step, and the returned point
/// satisfies the constraint to machine precision.
pub fn admm_basis_pursuit(
    a: &DenseMatrix,
    y: &[f64],
    opts: &SolveOptions,
) -> Result<SolveReport> {
    let n = a.cols();
    opts.validate(n)?;
    if y.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: y.len(),
            context: "basis pursuit rhs",
        });
    }
    let weights = opts.weights_or_ones(n);

    let (x0, feas_res) = consistent_solve(a, y)?;
    if feas_res > EQUALITY_FEAS_REL_TOL * norm2(y) {
        return Err(Error::Infeasible);
    }
    let basis = null_space_basis_auto(a);
    let d = basis.cols();

    let mut rho = opts.penalty;
    let mut x = x0.clone();
    let mut z = vec![0.0; n];
    let mut u = vec![0.0; n];
    let sqrt_n = (n as f64).sqrt();

    for iter in 1..=opts.max_iters {
        // Project z - u onto {x : Ax = y}: x0 + B Bᵀ (z - u - x0).
        if d > 0 {
            let shifted = sub(&sub(&z, &u), &x0);
            let coeffs = basis.matvec_t(&shifted)?;
            x = add(&x0, &basis.matvec(&coeffs)?);
        } else {
            x = x0.clone();
        }

        let thresholds: Vec<f64> = weights.iter().map(|w| w / rho).collect();
        let z_prev = z.clone();
        z = soft_threshold(&add(&x, &u), &thresholds)?;
        for i in 0..n {
            u[i] += x[i] - z[i];
        }

        let r_norm = norm2(&sub(&x, &z));
        let s_norm = rho * norm2(&sub(&z, &z_prev));
        let eps_pri = sqrt_n * opts.abs_tol + opts.rel_tol * norm2(&x).max(norm2(&z));
        let eps_dual = sqrt_n * opts.abs_tol + opts.rel_tol * rho * norm2(&u);
        if r_norm <= eps_pri && s_norm <= eps_dual {
            return Ok(SolveReport {
                objective: weighted_l1(&x, &weights),
                x,
                primal_residual: r_norm,
                dual_residual: s_norm,
                iterations: iter,
                status: SolveStatus::Converged,
            });
        }

        if opts.adaptive_penalty {
            if r_norm > 10.0 * s_norm {
                rho *= 2.0;
                for v in u.iter_mut() {
                    *v *= 0.5;
                }
            } else if s_norm > 10.0 * r_norm {
                rho *= 0.5;
                for v in u.iter_mut() {
                    *v *= 2.0;
                }
            }
        }
    }

    let r_norm = norm2(&sub(&x, &z));
    Ok(SolveReport {
        objective: weighted_l1(&x, &weights),
        x,
        primal_residual: r_norm,
        dual_residual: f64::NAN,
        iterations: opts.max_iters,
        status: SolveStatus::MaxIters,
    })
}

/// Cached solver for `(I + AᵀA) x = rhs` via the QR factorization of the
/// stacked matrix `[A; I]`, whose Gram matrix is exactly `I + AᵀA`.
struct RidgeSolver {
    r: DenseMatrix,
}

impl RidgeSolver {
    fn new(a: &DenseMatrix) -> Self {
        let n = a.cols();
        let k = a.rows();
        let mut stacked = DenseMatrix::zeros(k + n, n);
        for i in 0..k {
            for j in 0..n {
                stacked.set(i, j, a.get(i, j));
            }
        }
        for j in 0..n {
            stacked.set(k + j, j, 1.0);
        }
        let f = qr_factor_auto(&stacked);
        Self { r: f.r }
    }

    /// Solve RᵀR x = rhs by forward then back substitution.
    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let mut w = vec![0.0; n];
        for i in 0..n {
            let mut s = rhs[i];
            for j in 0..i {
                s -= self.r.get(j, i) * w[j];
            }
            w[i] = s / self.r.get(i, i);
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = w[i];
            for j in i + 1..n {
                s -= self.r.get(i, j) * x[j];
            }
            x[i] = s / self.r.get(i, i);
        }
        x
    }
}

fn project_onto_ball(v: &[f64], center: &[f64], radius: f64) -> Vec<f64> {
    let d = sub(v, center);
    let norm = norm2(&d);
    if norm <= radius {
        v.to_vec()
    } else {
        add(center, &scale(&d, radius / norm))
    }
}

/// `min Σ wᵢ|xᵢ|  s.t.  ||A x - y||₂ <= eta` by three-block consensus
/// splitting over the stack `(x = z, A x = w)`.
///
/// After the iteration stops, the returned point is pulled exactly inside the
/// constraint ball along the segment toward the minimum-residual point, so
/// callers can rely on strict feasibility rather than a convergence-sized
/// slack.
pub fn admm_bpdn(
    a: &DenseMatrix,
    y: &[f64],
    eta: f64,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    let n = a.cols();
    let k = a.rows();
    opts.validate(n)?;
    if y.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: y.len(),
            context: "bpdn rhs",
        });
    }
    if !(eta >= 0.0) || !eta.is_finite() {
        return Err(Error::DomainError(format!(
            "noise radius must be nonnegative, got {eta}"
        )));
    }
    let weights = opts.weights_or_ones(n);

    // Zero is feasible and optimal when the ball already contains the origin image.
    if norm2(y) <= eta {
        return Ok(SolveReport {
            x: vec![0.0; n],
            objective: 0.0,
            primal_residual: 0.0,
            dual_residual: 0.0,
            iterations: 0,
            status: SolveStatus::Converged,
        });
    }

    let (anchor, min_residual) = consistent_solve(a, y)?;
    if min_residual > eta + 1e-9 * (1.0 + norm2(y)) {
        return Ok(SolveReport {
            x: vec![0.0; n],
            objective: 0.0,
            primal_residual: min_residual,
            dual_residual: f64::NAN,
            iterations: 0,
            status: SolveStatus::Infeasible,
        });
    }

    let ridge = RidgeSolver::new(a);
    let mut rho = opts.penalty;
    let mut x = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut w = y.to_vec();
    let mut u_z = vec![0.0; n];
    let mut u_w = vec![0.0; k];
    let sqrt_dim = ((n + k) as f64).sqrt();

    let mut iterations = opts.max_iters;
    let mut converged = false;
    let mut r_norm = f64::NAN;
    let mut s_norm = f64::NAN;

    for iter in 1..=opts.max_iters {
        let rhs = add(&sub(&z, &u_z), &a.matvec_t(&sub(&w, &u_w))?);
        x = ridge.solve(&rhs);
        let ax = a.matvec(&x)?;

        let thresholds: Vec<f64> = weights.iter().map(|wi| wi / rho).collect();
        let z_prev = z.clone();
        z = soft_threshold(&add(&x, &u_z), &thresholds)?;
        let w_prev = w.clone();
        w = project_onto_ball(&add(&ax, &u_w), y, eta);

        for i in 0..n {
            u_z[i] += x[i] - z[i];
        }
        for i in 0..k {
            u_w[i] += ax[i] - w[i];
        }

        let r_z = norm2(&sub(&x, &z));
        let r_w = norm2(&sub(&ax, &w));
        r_norm = (r_z * r_z + r_w * r_w).sqrt();
        let dz = sub(&z, &z_prev);
        let dw_t = a.matvec_t(&sub(&w, &w_prev))?;
        s_norm = rho * (dot(&dz, &dz) + dot(&dw_t, &dw_t)).sqrt();

        let pri_scale = {
            let lhs = (dot(&x, &x) + dot(&ax, &ax)).sqrt();
            let rhs_s = (dot(&z, &z) + dot(&w, &w)).sqrt();
            lhs.max(rhs_s)
        };
        let eps_pri = sqrt_dim * opts.abs_tol + opts.rel_tol * pri_scale;
        let dual_vec = add(&u_z, &a.matvec_t(&u_w)?);
        let eps_dual = (n as f64).sqrt() * opts.abs_tol + opts.rel_tol * rho * norm2(&dual_vec);
        if r_norm <= eps_pri && s_norm <= eps_dual {
            iterations = iter;
            converged = true;
            break;
        }

        if opts.adaptive_penalty {
            if r_norm > 10.0 * s_norm {
                rho *= 2.0;
                for v in u_z.iter_mut() {
                    *v *= 0.5;
                }
                for v in u_w.iter_mut() {
                    *v *= 0.5;
                }
            } else if s_norm > 10.0 * r_norm {
                rho *= 0.5;
                for v in u_z.iter_mut() {
                    *v *= 2.0;
                }
                for v in u_w.iter_mut() {
                    *v *= 2.0;
                }
            }
        }
    }

    if eta > 0.0 {
        x = restore_ball_feasibility(a, y, eta, &x, &anchor)?;
    }
    let achieved = norm2(&sub(&a.matvec(&x)?, y));

    Ok(SolveReport {
        objective: weighted_l1(&x, &weights),
        x,
        primal_residual: if converged { r_norm } else { achieved },
        dual_residual: s_norm,
        iterations,
        status: if converged {
            SolveStatus::Converged
        } else {
            SolveStatus::MaxIters
        },
    })
}

/// Pull `x` inside the ball `||Ax - y|| <= eta` by moving the minimum
/// distance along the segment toward the minimum-residual anchor. The
/// residual norm is a convex quadratic along that segment with its minimum
/// at the anchor, so the crossing point is a root of a scalar quadratic.
fn restore_ball_feasibility(
    a: &DenseMatrix,
    y: &[f64],
    eta: f64,
    x: &[f64],
    anchor: &[f64],
) -> Result<Vec<f64>> {
    let target = eta * (1.0 - BALL_INTERIOR_MARGIN);
    let res0 = sub(&a.matvec(x)?, y);
    let c0 = dot(&res0, &res0);
    if c0.sqrt() <= target {
        return Ok(x.to_vec());
    }
    let delta = sub(anchor, x);
    let ad = a.matvec(&delta)?;
    let qa = dot(&ad, &ad);
    let qb = 2.0 * dot(&res0, &ad);
    let qc = c0 - target * target;
    // qa t^2 + qb t + qc = 0; the decreasing branch gives the smaller root.
    let disc = qb * qb - 4.0 * qa * qc;
    let t = if qa <= 0.0 || disc < 0.0 {
        1.0
    } else {
        let root = (-qb - disc.sqrt()) / (2.0 * qa);
        root.clamp(0.0, 1.0)
    };
    Ok(x.iter().zip(&delta).map(|(xi, di)| xi + t * di).collect())
}
