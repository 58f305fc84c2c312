//! Householder QR, least squares, and null-space bases.

use super::{default_rank_tolerance, dot, norm2, DenseMatrix};
use crate::error::{Error, Result};

/// QR factorization `M = Q R` with `Q` having orthonormal columns and `R`
/// upper triangular (upper trapezoidal for wide `M`).
///
/// `rank` counts diagonal entries of `R` with magnitude above
/// `rank_tolerance`. The diagonal of `R` is canonicalized to be nonnegative,
/// which makes the factorization of a full-rank matrix unique and
/// deterministic.
#[derive(Debug, Clone)]
pub struct QrFactorization {
    pub q: DenseMatrix,
    pub r: DenseMatrix,
    pub rank: usize,
    pub rank_tolerance: f64,
}

impl QrFactorization {
    /// Least-squares solve `min ||M x - b||` using the stored factors.
    /// Requires full column rank.
    pub fn solve_least_squares(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.r.cols();
        if self.rank < n {
            return Err(Error::RankDeficient {
                rank: self.rank,
                cols: n,
                context: "least squares",
            });
        }
        if b.len() != self.q.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.q.rows(),
                got: b.len(),
                context: "least squares rhs",
            });
        }
        if n == 0 {
            return Ok(Vec::new());
        }
        let qtb = self.q.matvec_t(b)?;
        back_substitute(&self.r, &qtb[..n])
    }
}

/// Householder QR with thin `Q` (`m x min(m,n)`).
pub fn qr_factor(m: &DenseMatrix, rank_tolerance: f64) -> Result<QrFactorization> {
    if rank_tolerance <= 0.0 || !rank_tolerance.is_finite() {
        return Err(Error::DomainError(format!(
            "rank tolerance must be positive, got {rank_tolerance}"
        )));
    }
    Ok(householder(m, false, Some(rank_tolerance)))
}

/// Householder QR with the scale-invariant default rank tolerance.
pub fn qr_factor_auto(m: &DenseMatrix) -> QrFactorization {
    householder(m, false, None)
}

/// Householder QR with full square `Q` (`m x m`); used to extract orthonormal
/// complements such as null-space bases.
pub fn qr_factor_full(m: &DenseMatrix, rank_tolerance: Option<f64>) -> QrFactorization {
    householder(m, true, rank_tolerance)
}

fn householder(m: &DenseMatrix, full_q: bool, rank_tolerance: Option<f64>) -> QrFactorization {
    let rows = m.rows();
    let cols = m.cols();
    let t = rows.min(cols);
    let mut r = m.clone();
    // Reflectors stored as (start row, v); the applied map is I - beta v v^T.
    let mut reflectors: Vec<(usize, Vec<f64>, f64)> = Vec::with_capacity(t);

    for j in 0..t {
        let mut v: Vec<f64> = (j..rows).map(|i| r.get(i, j)).collect();
        let norm = norm2(&v);
        if norm == 0.0 {
            reflectors.push((j, v, 0.0));
            continue;
        }
        let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
        v[0] += sign * norm;
        let beta = 2.0 / dot(&v, &v);
        // Apply to the remaining columns of R.
        for c in j..cols {
            let mut w = 0.0;
            for (offset, vi) in v.iter().enumerate() {
                w += vi * r.get(j + offset, c);
            }
            w *= beta;
            for (offset, vi) in v.iter().enumerate() {
                let cur = r.get(j + offset, c);
                r.set(j + offset, c, cur - w * vi);
            }
        }
        // The annihilated column is exactly -sign * norm on the diagonal.
        r.set(j, j, -sign * norm);
        for i in j + 1..rows {
            r.set(i, j, 0.0);
        }
        reflectors.push((j, v, beta));
    }

    // Accumulate Q by applying the reflectors to the identity in reverse.
    let qcols = if full_q { rows } else { t };
    let mut q = DenseMatrix::zeros(rows, qcols);
    for c in 0..qcols {
        q.set(c, c, 1.0);
    }
    for (j, v, beta) in reflectors.iter().rev() {
        if *beta == 0.0 {
            continue;
        }
        for c in 0..qcols {
            let mut w = 0.0;
            for (offset, vi) in v.iter().enumerate() {
                w += vi * q.get(j + offset, c);
            }
            w *= beta;
            for (offset, vi) in v.iter().enumerate() {
                let cur = q.get(j + offset, c);
                q.set(j + offset, c, cur - w * vi);
            }
        }
    }

    // Canonicalize: nonnegative diagonal of R.
    for j in 0..t {
        if r.get(j, j) < 0.0 {
            for c in j..cols {
                let v = r.get(j, c);
                r.set(j, c, -v);
            }
            for i in 0..rows {
                let v = q.get(i, j);
                q.set(i, j, -v);
            }
        }
    }

    // Thin form: only the first t rows of R are nonzero.
    if !full_q && t < rows {
        let mut trimmed = DenseMatrix::zeros(t, cols);
        for i in 0..t {
            for j in 0..cols {
                trimmed.set(i, j, r.get(i, j));
            }
        }
        r = trimmed;
    }

    let max_diag = (0..t).fold(0.0_f64, |m, j| m.max(r.get(j, j).abs()));
    let tol = rank_tolerance.unwrap_or_else(|| default_rank_tolerance(rows, cols, max_diag));
    let rank = (0..t).filter(|&j| r.get(j, j).abs() > tol).count();

    QrFactorization {
        q,
        r,
        rank,
        rank_tolerance: tol,
    }
}

fn back_substitute(r: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for j in i + 1..n {
            s -= r.get(i, j) * x[j];
        }
        let d = r.get(i, i);
        if d == 0.0 {
            return Err(Error::RankDeficient {
                rank: i,
                cols: n,
                context: "back substitution",
            });
        }
        x[i] = s / d;
    }
    Ok(x)
}

/// `argmin ||M x - b||_2` for a full-column-rank `M`.
pub fn least_squares_solve(m: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    qr_factor_auto(m).solve_least_squares(b)
}

/// Orthonormal basis of the null space of `M`, via full QR of `Mᵀ`.
///
/// The returned matrix has `cols(M) - rank(M)` columns (possibly zero).
pub fn null_space_basis(m: &DenseMatrix, tol: f64) -> Result<DenseMatrix> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::DomainError(format!(
            "rank tolerance must be positive, got {tol}"
        )));
    }
    let f = qr_factor_full(&m.transpose(), Some(tol));
    let n = m.cols();
    Ok(f.q.columns(f.rank, n - f.rank))
}

/// Null-space basis with the default rank tolerance.
pub fn null_space_basis_auto(m: &DenseMatrix) -> DenseMatrix {
    let f = qr_factor_full(&m.transpose(), None);
    f.q.columns(f.rank, m.cols() - f.rank)
}

/// A solution of `A x = y` when the system is consistent, together with the
/// achieved residual norm `||A x - y||_2`.
///
/// Works for any shape and rank: tiny pivots are skipped, so the caller must
/// inspect the residual to distinguish a consistent system from an
/// inconsistent one. For full-row-rank `A` the residual is zero up to
/// rounding and the returned point lies in the row space of `A`.
pub fn consistent_solve(a: &DenseMatrix, y: &[f64]) -> Result<(Vec<f64>, f64)> {
    if y.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: y.len(),
            context: "consistent_solve rhs",
        });
    }
    let n = a.cols();
    let k = a.rows();
    let t = n.min(k);
    let f = qr_factor_full(&a.transpose(), None);
    // A = Rᵀ Qᵀ, so solve the leading lower-triangular block Rᵀ[..t,..t] v = y[..t].
    let mut v = vec![0.0; t];
    for i in 0..t {
        let mut s = y[i];
        for j in 0..i {
            s -= f.r.get(j, i) * v[j];
        }
        let d = f.r.get(i, i);
        v[i] = if d.abs() > f.rank_tolerance { s / d } else { 0.0 };
    }
    let mut x = vec![0.0; n];
    for i in 0..n {
        for (j, vj) in v.iter().enumerate() {
            x[i] += f.q.get(i, j) * vj;
        }
    }
    let res = norm2(&super::sub(&a.matvec(&x)?, y));
    Ok((x, res))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sub;

    fn reconstruction_error(m: &DenseMatrix, f: &QrFactorization) -> f64 {
        f.q.matmul(&f.r).unwrap().max_abs_diff(m)
    }

    fn orthonormality_error(q: &DenseMatrix) -> f64 {
        let g = q.gram();
        g.max_abs_diff(&DenseMatrix::identity(q.cols()))
    }

    // Deterministic pseudo-random fill for tests, decoupled from randgen.
    fn test_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
        let mut state = seed;
        let entries: Vec<f64> = (0..rows * cols)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
            })
            .collect();
        DenseMatrix::new(rows, cols, entries).unwrap()
    }

    #[test]
    fn identity_factors_to_identity() {
        let m = DenseMatrix::identity(3);
        let f = qr_factor(&m, 1e-12).unwrap();
        assert_eq!(f.q, DenseMatrix::identity(3));
        assert_eq!(f.r, DenseMatrix::identity(3));
        assert_eq!(f.rank, 3);
    }

    #[test]
    fn pythagorean_column() {
        let m = DenseMatrix::column(&[3.0, 4.0]).unwrap();
        let f = qr_factor(&m, 1e-12).unwrap();
        assert!((f.r.get(0, 0).abs() - 5.0).abs() < 1e-12);
        assert_eq!(f.rank, 1);
    }

    #[test]
    fn random_full_rank_reconstructs() {
        let m = test_matrix(8, 5, 42);
        let f = qr_factor_auto(&m);
        assert!(reconstruction_error(&m, &f) <= 1e-9 * (1.0 + m.max_abs()));
        assert!(orthonormality_error(&f.q) <= 1e-10);
        assert_eq!(f.rank, 5);
    }

    #[test]
    fn least_squares_square_system() {
        let m = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let x0 = vec![1.5, -2.0];
        let b = m.matvec(&x0).unwrap();
        let x = least_squares_solve(&m, &b).unwrap();
        assert!(norm2(&sub(&x, &x0)) < 1e-10);
    }

    #[test]
    fn least_squares_overdetermined_consistent() {
        let m = test_matrix(7, 3, 7);
        let x0 = vec![1.0, -0.5, 2.0];
        let b = m.matvec(&x0).unwrap();
        let x = least_squares_solve(&m, &b).unwrap();
        assert!(norm2(&sub(&x, &x0)) < 1e-9);
    }

    #[test]
    fn least_squares_normal_equation_residual() {
        let m = test_matrix(9, 4, 3);
        let b: Vec<f64> = (0..9).map(|i| (i as f64 * 0.7).sin()).collect();
        let x = least_squares_solve(&m, &b).unwrap();
        // Residual orthogonal to the column space.
        let r = sub(&m.matvec(&x).unwrap(), &b);
        let g = m.matvec_t(&r).unwrap();
        let scale = norm2(&b).max(1.0);
        assert!(crate::linalg::norm_inf(&g) <= 1e-8 * scale);
    }

    #[test]
    fn least_squares_rejects_rank_deficient() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(matches!(
            least_squares_solve(&m, &[1.0, 1.0, 1.0]),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn null_space_of_injective_map_is_empty() {
        let b = null_space_basis(&DenseMatrix::identity(4), 1e-12).unwrap();
        assert_eq!(b.cols(), 0);
        assert_eq!(b.rows(), 4);
    }

    #[test]
    fn null_space_of_row_sums() {
        let m = DenseMatrix::new(1, 2, vec![1.0, 1.0]).unwrap();
        let b = null_space_basis(&m, 1e-12).unwrap();
        assert_eq!(b.cols(), 1);
        let v = b.col_vec(0);
        let inv_sqrt2 = 0.5_f64.sqrt();
        assert!((v[0].abs() - inv_sqrt2).abs() < 1e-12);
        assert!((v[0] + v[1]).abs() < 1e-12);
    }

    #[test]
    fn null_space_random_wide() {
        let m = test_matrix(6, 10, 11);
        let b = null_space_basis_auto(&m);
        assert_eq!(b.cols(), 4);
        let mb = m.matmul(&b).unwrap();
        assert!(mb.max_abs() <= 1e-8);
        assert!(orthonormality_error(&b) <= 1e-9);
    }

    #[test]
    fn rank_plus_nullity_property() {
        for seed in 0..10 {
            let rows = 3 + (seed as usize % 5);
            let cols = 4 + (seed as usize % 6);
            let m = test_matrix(rows, cols, 100 + seed);
            let f = qr_factor_full(&m.transpose(), None);
            let basis = f.q.columns(f.rank, cols - f.rank);
            assert_eq!(f.rank + basis.cols(), cols);
        }
    }

    #[test]
    fn consistent_solve_wide_system() {
        let a = test_matrix(4, 9, 21);
        let y: Vec<f64> = (0..4).map(|i| i as f64 - 1.5).collect();
        let (x, res) = consistent_solve(&a, &y).unwrap();
        assert!(res <= 1e-10 * (1.0 + norm2(&y)));
        assert!(norm2(&sub(&a.matvec(&x).unwrap(), &y)) <= 1e-10);
    }

    #[test]
    fn consistent_solve_reports_inconsistency() {
        // Rank-1 tall system with incompatible rhs.
        let a = DenseMatrix::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
        let (_, res) = consistent_solve(&a, &[1.0, 2.0]).unwrap();
        assert!(res > 0.5);
    }
}
