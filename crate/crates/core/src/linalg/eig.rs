//! Cyclic Jacobi eigensolver for small symmetric matrices.
//!
//! The matrices this crate diagonalizes are Gram matrices of a handful of
//! columns (restricted-isometry enumeration works on `s x s` blocks with
//! `s` in the single digits), where Jacobi is robust, deterministic, and
//! plenty fast.

use super::DenseMatrix;
use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-10;
const OFF_DIAG_REL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a symmetric matrix, sorted ascending.
pub fn sym_eig(g: &DenseMatrix) -> Result<Vec<f64>> {
    let n = g.rows();
    if n != g.cols() {
        return Err(Error::NotSymmetric);
    }
    for i in 0..n {
        for j in i + 1..n {
            if (g.get(i, j) - g.get(j, i)).abs() > SYMMETRY_TOL {
                return Err(Error::NotSymmetric);
            }
        }
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    let mut a = g.clone();
    let fro = g.frobenius_norm();
    let threshold = OFF_DIAG_REL_TOL * fro;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += 2.0 * a.get(i, j) * a.get(i, j);
            }
        }
        if off.sqrt() <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                // Smaller-root tangent keeps the rotation angle below pi/4.
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, c * aip - s * aiq);
                    a.set(i, q, s * aip + c * aiq);
                }
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, c * apj - s * aqj);
                    a.set(q, j, s * apj + c * aqj);
                }
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigs)
}

/// Largest singular value of `M`, computed as the square root of the top
/// eigenvalue of the smaller of the two Gram matrices.
pub fn spectral_norm(m: &DenseMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = if m.cols() <= m.rows() {
        m.gram()
    } else {
        m.transpose().gram()
    };
    let eigs = sym_eig(&gram).expect("gram matrix is symmetric by construction");
    eigs.last().map_or(0.0, |&l| l.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_returns_sorted_diagonal() {
        let g = DenseMatrix::from_rows(&[
            vec![3.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ])
        .unwrap();
        assert_eq!(sym_eig(&g).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let g = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let eigs = sym_eig(&g).unwrap();
        assert!((eigs[0] - 1.0).abs() < 1e-12);
        assert!((eigs[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let g = DenseMatrix::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(sym_eig(&g), Err(Error::NotSymmetric)));
    }

    #[test]
    fn trace_and_determinant_consistency() {
        // Random Gram matrix; trace = eigenvalue sum, det (by LU) = product.
        let mut state = 99u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let b = DenseMatrix::new(8, 5, (0..40).map(|_| next()).collect()).unwrap();
        let g = b.gram();
        let eigs = sym_eig(&g).unwrap();

        let trace: f64 = (0..5).map(|i| g.get(i, i)).sum();
        let eig_sum: f64 = eigs.iter().sum();
        assert!((trace - eig_sum).abs() <= 1e-8 * trace.abs().max(1.0));

        let det = lu_determinant(&g);
        let eig_prod: f64 = eigs.iter().product();
        assert!((det - eig_prod).abs() <= 1e-6 * det.abs().max(1.0));
    }

    // Independent determinant oracle: Gaussian elimination with partial pivoting.
    fn lu_determinant(g: &DenseMatrix) -> f64 {
        let n = g.rows();
        let mut a = g.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&i, &j| {
                    a.get(i, col)
                        .abs()
                        .partial_cmp(&a.get(j, col).abs())
                        .unwrap()
                })
                .unwrap();
            if pivot_row != col {
                for j in 0..n {
                    let tmp = a.get(col, j);
                    a.set(col, j, a.get(pivot_row, j));
                    a.set(pivot_row, j, tmp);
                }
                det = -det;
            }
            let p = a.get(col, col);
            if p == 0.0 {
                return 0.0;
            }
            det *= p;
            for i in col + 1..n {
                let f = a.get(i, col) / p;
                for j in col..n {
                    let v = a.get(i, j) - f * a.get(col, j);
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    #[test]
    fn spectral_norm_identity_and_diagonal() {
        assert!((spectral_norm(&DenseMatrix::identity(4)) - 1.0).abs() < 1e-12);
        let d = DenseMatrix::from_rows(&[vec![3.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((spectral_norm(&d) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_norm_dominates_random_unit_vectors() {
        let mut state = 7u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let m = DenseMatrix::new(6, 4, (0..24).map(|_| next()).collect()).unwrap();
        let sigma = spectral_norm(&m);
        let mut best = 0.0f64;
        for _ in 0..1000 {
            let v: Vec<f64> = (0..4).map(|_| next()).collect();
            let n = crate::linalg::norm2(&v);
            if n == 0.0 {
                continue;
            }
            let unit: Vec<f64> = v.iter().map(|x| x / n).collect();
            best = best.max(crate::linalg::norm2(&m.matvec(&unit).unwrap()));
        }
        // Randomized lower bound: the true norm can only exceed it.
        assert!(sigma >= best - 1e-8);
        assert!(sigma <= best * 1.2 + 1e-8, "sanity: not wildly above");
    }
}
