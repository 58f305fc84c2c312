//! Dense two-phase primal simplex with Bland's anti-cycling rule.
//!
//! The tableau is dense and the pivot rule is deterministic (lowest index
//! everywhere), so repeated runs on the same instance produce the same
//! vertex. This is the exact reference the splitting solvers are tested
//! against, and the engine behind the null-space-ratio linear programs.

use super::{weighted_l1, SolveReport, SolveStatus};
use crate::error::{Error, Result};
use crate::linalg::{norm2, qr_factor_auto, qr_factor_full, sub, DenseMatrix};

const REDUCED_COST_TOL: f64 = 1e-9;
const RATIO_PIVOT_TOL: f64 = 1e-9;
const PIVOT_BREAKDOWN_TOL: f64 = 1e-12;
const PHASE1_FEASIBILITY_TOL: f64 = 1e-9;

/// Solution of `min cᵀx s.t. Ax = b, x >= 0`.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

struct Tableau {
    /// `rows x (total_cols + 1)`; last column is the right-hand side.
    rows: Vec<Vec<f64>>,
    /// Reduced-cost row, same width as `rows` entries.
    cost: Vec<f64>,
    basis: Vec<usize>,
    n_struct: usize,
    total: usize,
    iterations: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) -> Result<()> {
        let p = self.rows[row][col];
        if p.abs() < PIVOT_BREAKDOWN_TOL {
            return Err(Error::NumericalBreakdown(p.abs()));
        }
        let inv = 1.0 / p;
        for v in self.rows[row].iter_mut() {
            *v *= inv;
        }
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let f = self.rows[i][col];
            if f != 0.0 {
                let (pivot_row, other) = if i < row {
                    let (a, b) = self.rows.split_at_mut(row);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = self.rows.split_at_mut(i);
                    (&a[row], &mut b[0])
                };
                for (o, pv) in other.iter_mut().zip(pivot_row) {
                    *o -= f * pv;
                }
            }
        }
        let f = self.cost[col];
        if f != 0.0 {
            let pivot_row = &self.rows[row];
            for (o, pv) in self.cost.iter_mut().zip(pivot_row) {
                *o -= f * pv;
            }
        }
        self.basis[row] = col;
        self.iterations += 1;
        Ok(())
    }

    /// Run simplex iterations until optimality over columns `allowed` permits
    /// no improving pivot.
    ///
    /// Pricing is Dantzig's (most negative reduced cost, lowest index on
    /// ties). The ratio test is lexicographic: among rows tying at the
    /// minimum ratio, the winner has the lexicographically smallest row of
    /// the running basis inverse (the artificial block), scaled by the pivot
    /// entry. This is the classic symbolic perturbation, so no basis can
    /// repeat; the l1 problems this engine sees have heavily degenerate
    /// optimal faces on which lowest-index rules stall for millions of
    /// iterations. Fully deterministic.
    fn optimize(&mut self, allowed: usize) -> Result<()> {
        let m = self.rows.len();
        let cap = 200 * (self.total + m) + 20_000;
        loop {
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..allowed {
                let c = self.cost[j];
                if c < -REDUCED_COST_TOL && entering.is_none_or(|(_, bc)| c < bc) {
                    entering = Some((j, c));
                }
            }
            let Some((col, _)) = entering else {
                return Ok(());
            };

            let mut candidates: Vec<usize> = Vec::new();
            let mut best_ratio = f64::INFINITY;
            for i in 0..m {
                let a = self.rows[i][col];
                if a > RATIO_PIVOT_TOL {
                    let ratio = self.rows[i][self.total] / a;
                    let tol = 1e-9 * (1.0 + best_ratio.abs().min(ratio.abs()));
                    if ratio < best_ratio - tol {
                        best_ratio = ratio;
                        candidates.clear();
                        candidates.push(i);
                    } else if ratio <= best_ratio + tol {
                        best_ratio = best_ratio.min(ratio);
                        candidates.push(i);
                    }
                }
            }
            // Bounded-below objectives cannot produce a true unbounded ray,
            // so a missing pivot is a numerical failure.
            if candidates.is_empty() {
                return Err(Error::NumericalBreakdown(0.0));
            }
            let row = if candidates.len() == 1 {
                candidates[0]
            } else {
                self.lexicographic_leaving(&candidates, col)
            };
            self.pivot(row, col)?;
            if self.iterations > cap {
                return Err(Error::NumericalBreakdown(f64::NAN));
            }
        }
    }

    /// Among tied rows, pick the one minimizing the basis-inverse row scaled
    /// by the pivot entry, compared lexicographically column by column.
    fn lexicographic_leaving(&self, candidates: &[usize], col: usize) -> usize {
        let art_start = self.n_struct;
        let art_end = self.total;
        let mut best = candidates[0];
        let mut best_inv = 1.0 / self.rows[best][col];
        for &i in &candidates[1..] {
            let inv = 1.0 / self.rows[i][col];
            let mut decided = false;
            for c in art_start..art_end {
                let a = self.rows[i][c] * inv;
                let b = self.rows[best][c] * best_inv;
                if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                    if a < b {
                        best = i;
                        best_inv = inv;
                    }
                    decided = true;
                    break;
                }
            }
            if !decided && self.basis[i] < self.basis[best] {
                best = i;
                best_inv = inv;
            }
        }
        best
    }

    fn basic_values(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.total];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.rows[i][self.total];
        }
        x
    }

    /// Rebuild the canonical tableau exactly from the pristine constraint
    /// data and the objective `c`: rows become `B⁺ [A | b]`, the cost row
    /// becomes the exact reduced costs. Incremental pivot updates drift
    /// after a few hundred iterations; refactoring at termination
    /// boundaries keeps optimality decisions honest.
    fn refresh(&mut self, pristine: &[Vec<f64>], c: &[f64]) -> Result<()> {
        let m_orig = pristine.len();
        let mp = self.basis.len();
        let mut basis_cols = DenseMatrix::zeros(m_orig, mp);
        for (j, &var) in self.basis.iter().enumerate() {
            for i in 0..m_orig {
                basis_cols.set(i, j, pristine[i][var]);
            }
        }
        let f = qr_factor_auto(&basis_cols);
        if f.rank < mp {
            return Err(Error::NumericalBreakdown(f.rank_tolerance));
        }
        let mut fresh = vec![vec![0.0; self.total + 1]; mp];
        for col in 0..=self.total {
            let colvec: Vec<f64> = (0..m_orig).map(|i| pristine[i][col]).collect();
            let solved = f.solve_least_squares(&colvec)?;
            for i in 0..mp {
                fresh[i][col] = solved[i];
            }
        }
        self.rows = fresh;

        let mut cost = vec![0.0; self.total + 1];
        cost[..self.total].copy_from_slice(c);
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = c[bv];
            if cb != 0.0 {
                let row = self.rows[i].clone();
                for (o, rv) in cost.iter_mut().zip(&row) {
                    *o -= cb * rv;
                }
            }
        }
        self.cost = cost;
        Ok(())
    }

    /// Optimize, refactor, and re-check until optimality holds against
    /// exact reduced costs.
    fn optimize_verified(
        &mut self,
        pristine: &[Vec<f64>],
        c: &[f64],
        allowed: usize,
    ) -> Result<()> {
        for _ in 0..50 {
            self.optimize(allowed)?;
            self.refresh(pristine, c)?;
            if (0..allowed).all(|j| self.cost[j] >= -REDUCED_COST_TOL) {
                return Ok(());
            }
        }
        Err(Error::NumericalBreakdown(f64::NAN))
    }
}

/// Exact solve of the standard-form linear program
/// `min cᵀx  s.t.  Ax = b, x >= 0`
/// by two-phase primal simplex.
pub fn solve_standard_form(a: &DenseMatrix, b: &[f64], c: &[f64]) -> Result<LpSolution> {
    let m = a.rows();
    let n = a.cols();
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: b.len(),
            context: "lp rhs",
        });
    }
    if c.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: c.len(),
            context: "lp objective",
        });
    }

    let total = n + m;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![0.0; total + 1];
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            row[j] = flip * a.get(i, j);
        }
        row[n + i] = 1.0;
        row[total] = flip * b[i];
        rows.push(row);
    }
    // Pristine copy of the constraint data for the final basis re-solve.
    let pristine = rows.clone();
    let basis: Vec<usize> = (n..total).collect();

    // Phase 1: minimize the sum of artificials. In canonical form the
    // reduced-cost row is the negated column sums over structural columns.
    let mut cost = vec![0.0; total + 1];
    for row in &rows {
        for j in 0..n {
            cost[j] -= row[j];
        }
        cost[total] -= row[total];
    }

    let mut t = Tableau {
        rows,
        cost,
        basis,
        n_struct: n,
        total,
        iterations: 0,
    };
    let phase1_costs: Vec<f64> = (0..total).map(|j| if j < n { 0.0 } else { 1.0 }).collect();
    t.optimize_verified(&pristine, &phase1_costs, n)?;
    let phase1_obj = -t.cost[t.total];
    if phase1_obj > PHASE1_FEASIBILITY_TOL {
        return Err(Error::Infeasible);
    }

    // Drive leftover artificials out of the basis, pivoting on the largest
    // structural entry of the row (tiny pivots here poison the rest of the
    // solve); rows with no usable pivot are redundant constraints and get
    // dropped.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= t.n_struct {
            let mut col = 0;
            for j in 1..t.n_struct {
                if t.rows[i][j].abs() > t.rows[i][col].abs() {
                    col = j;
                }
            }
            if t.rows[i][col].abs() > RATIO_PIVOT_TOL {
                t.pivot(i, col)?;
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }

    // Phase 2 over the real objective (artificials keep zero cost and are
    // barred from entering).
    let mut phase2_costs = vec![0.0; total];
    phase2_costs[..n].copy_from_slice(c);
    t.optimize_verified(&pristine, &phase2_costs, n)?;

    // The final refresh already recomputed the basic values exactly.
    let full = t.basic_values();
    let x = full[..n].to_vec();
    let objective = crate::linalg::dot(c, &x);
    Ok(LpSolution {
        x,
        objective,
        iterations: t.iterations,
    })
}

/// Exact minimum of the weighted l1 norm subject to `A x = y`, via the
/// split-variable linear program over `x = x⁺ - x⁻`.
///
/// Zero-weight coordinates become free variables with zero cost. Redundant
/// measurement rows (the projected systems have rank `k - r` by
/// construction) are removed up front by an orthogonal row reduction:
/// `A = Q R` turns the constraints into the equivalent full-row-rank system
/// `R x = Qᵀ y`, whose trailing entries also expose inconsistent data.
pub fn simplex_l1(a: &DenseMatrix, y: &[f64], weights: &[f64]) -> Result<SolveReport> {
    let n = a.cols();
    if y.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: y.len(),
            context: "simplex rhs",
        });
    }
    if weights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: weights.len(),
            context: "simplex weights",
        });
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::DomainError(
            "weights must be finite and nonnegative".into(),
        ));
    }

    let f = qr_factor_full(a, None);
    let rank = f.rank;
    let qty = f.q.matvec_t(y)?;
    let tail = norm2(&qty[rank..]);
    if tail > 1e-8 * (1.0 + norm2(y)) {
        return Err(Error::Infeasible);
    }
    let mut reduced = DenseMatrix::zeros(rank, n);
    for i in 0..rank {
        for j in 0..n {
            reduced.set(i, j, f.r.get(i, j));
        }
    }
    let rhs = qty[..rank].to_vec();

    // [A | -A] over (x⁺, x⁻).
    let mut entries = Vec::with_capacity(rank * 2 * n);
    for i in 0..rank {
        entries.extend_from_slice(reduced.row(i));
        entries.extend(reduced.row(i).iter().map(|v| -v));
    }
    let split = DenseMatrix::new(rank, 2 * n, entries)?;
    let mut c = weights.to_vec();
    c.extend_from_slice(weights);

    let lp = solve_standard_form(&split, &rhs, &c)?;
    let x: Vec<f64> = (0..n).map(|j| lp.x[j] - lp.x[n + j]).collect();
    let primal_residual = norm2(&sub(&a.matvec(&x)?, y));
    Ok(SolveReport {
        objective: weighted_l1(&x, weights),
        x,
        primal_residual,
        dual_residual: 0.0,
        iterations: lp.iterations,
        status: SolveStatus::Converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let a = DenseMatrix::identity(2);
        let rep = simplex_l1(&a, &[3.0, -4.0], &[1.0, 1.0]).unwrap();
        assert!(norm2(&sub(&rep.x, &[3.0, -4.0])) < 1e-12);
        assert!((rep.objective - 7.0).abs() < 1e-12);
    }

    #[test]
    fn row_sum_objective_forced() {
        // min |x1|+|x2| s.t. x1+x2 = 2 has value exactly 2 at a vertex.
        let a = DenseMatrix::new(1, 2, vec![1.0, 1.0]).unwrap();
        let rep = simplex_l1(&a, &[2.0], &[1.0, 1.0]).unwrap();
        assert!((rep.objective - 2.0).abs() < 1e-12);
        let is_vertex = (rep.x[0] - 2.0).abs() < 1e-12 && rep.x[1].abs() < 1e-12
            || (rep.x[1] - 2.0).abs() < 1e-12 && rep.x[0].abs() < 1e-12;
        assert!(is_vertex, "vertex solution expected, got {:?}", rep.x);
    }

    #[test]
    fn infeasible_rhs_detected() {
        // Column space of the 2x1 ones matrix misses (1, 2).
        let a = DenseMatrix::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
        assert!(matches!(
            simplex_l1(&a, &[1.0, 2.0], &[1.0]),
            Err(Error::Infeasible)
        ));
    }

    #[test]
    fn zero_weights_make_coordinates_free() {
        // Free second coordinate absorbs everything: objective 0.
        let a = DenseMatrix::new(1, 2, vec![1.0, 1.0]).unwrap();
        let rep = simplex_l1(&a, &[2.0], &[1.0, 0.0]).unwrap();
        assert!(rep.objective.abs() < 1e-12);
        assert!((rep.x[0] + rep.x[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn free_coordinate_may_go_negative() {
        let a = DenseMatrix::new(1, 2, vec![1.0, 1.0]).unwrap();
        let rep = simplex_l1(&a, &[-3.0], &[1.0, 0.0]).unwrap();
        assert!(rep.objective.abs() < 1e-12);
        assert!((rep.x[1] + 3.0).abs() < 1e-12);
    }

    #[test]
    fn redundant_constraints_handled() {
        // Duplicate row: one constraint is redundant after phase 1.
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap();
        let rep = simplex_l1(&a, &[2.0, 2.0], &[1.0, 1.0]).unwrap();
        assert!((rep.objective - 1.0).abs() < 1e-12);
        assert!(norm2(&sub(&rep.x, &[0.0, 1.0])) < 1e-12);
    }

    #[test]
    fn standard_form_basic_lp() {
        // min -x1 - 2 x2 s.t. x1 + x2 + s = 4, x >= 0  =>  x2 = 4.
        let a = DenseMatrix::new(1, 3, vec![1.0, 1.0, 1.0]).unwrap();
        let sol = solve_standard_form(&a, &[4.0], &[-1.0, -2.0, 0.0]).unwrap();
        assert!((sol.objective + 8.0).abs() < 1e-12);
        assert!((sol.x[1] - 4.0).abs() < 1e-12);
    }
}
