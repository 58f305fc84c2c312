//! Exhaustive sparsest-solution oracle.

use super::{binomial, check_cap};
use crate::error::{Error, Result};
use crate::linalg::{norm2, qr_factor_auto, sub, DenseMatrix};
use itertools::Itertools;

const CONSISTENCY_REL_TOL: f64 = 1e-8;

/// Find the sparsest `x` with `A x = y` by trying every support of size
/// `0, 1, ..., s_max` in lexicographic order.
///
/// Returns the winner, its sparsity, and whether the minimal-sparsity
/// support is unique. A support is accepted when its restricted
/// least-squares residual is at most `1e-8 · (1 + ||y||₂)`; rank-deficient
/// restrictions are skipped (their solutions are covered by smaller
/// supports).
pub fn exhaustive_l0(
    a: &DenseMatrix,
    y: &[f64],
    s_max: usize,
) -> Result<(Vec<f64>, usize, bool)> {
    let n = a.cols();
    if y.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: y.len(),
            context: "l0 oracle rhs",
        });
    }
    if s_max > n {
        return Err(Error::DomainError(format!(
            "s_max {s_max} exceeds column count {n}"
        )));
    }
    check_cap(binomial(n, s_max))?;

    let tol = CONSISTENCY_REL_TOL * (1.0 + norm2(y));
    for size in 0..=s_max {
        let mut hits = 0usize;
        let mut best: Option<Vec<f64>> = None;
        for support in (0..n).combinations(size) {
            let x = if size == 0 {
                vec![0.0; n]
            } else {
                let sub_a = a.select_columns(&support);
                let f = qr_factor_auto(&sub_a);
                if f.rank < size {
                    continue;
                }
                let coeffs = f.solve_least_squares(y)?;
                let mut x = vec![0.0; n];
                for (&col, &v) in support.iter().zip(&coeffs) {
                    x[col] = v;
                }
                x
            };
            let residual = norm2(&sub(&a.matvec(&x)?, y));
            if residual <= tol {
                hits += 1;
                if best.is_none() {
                    best = Some(x);
                }
            }
        }
        if let Some(x) = best {
            return Ok((x, size, hits == 1));
        }
    }
    Err(Error::NoSolution(s_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randgen::{gaussian_matrix, planted_signal, Seed, SignalModel};

    #[test]
    fn identity_matrix_recovers_rhs() {
        let a = DenseMatrix::identity(5);
        let y = vec![0.0, 2.0, 0.0, -1.0, 0.0];
        let (x, sparsity, unique) = exhaustive_l0(&a, &y, 4).unwrap();
        assert_eq!(x, y);
        assert_eq!(sparsity, 2);
        assert!(unique);
    }

    #[test]
    fn zero_rhs_is_the_zero_solution() {
        let a = gaussian_matrix(4, 9, Seed::new(8));
        let (x, sparsity, unique) = exhaustive_l0(&a, &vec![0.0; 4], 3).unwrap();
        assert_eq!(x, vec![0.0; 9]);
        assert_eq!(sparsity, 0);
        assert!(unique);
    }

    #[test]
    fn planted_two_sparse_recovered_uniquely() {
        for seed in 0..10u64 {
            let a = gaussian_matrix(6, 12, Seed::new(200 + seed));
            let sig = planted_signal(12, 2, 0, &SignalModel::default(), Seed::new(300 + seed))
                .unwrap();
            let y = a.matvec(&sig.x1).unwrap();
            let (x, sparsity, unique) = exhaustive_l0(&a, &y, 3).unwrap();
            assert_eq!(sparsity, 2, "seed {seed}");
            assert!(unique, "seed {seed}");
            assert!(norm2(&sub(&x, &sig.x1)) < 1e-7, "seed {seed}");
        }
    }

    #[test]
    fn no_solution_below_true_sparsity() {
        let a = gaussian_matrix(5, 10, Seed::new(17));
        let sig = planted_signal(10, 3, 0, &SignalModel::default(), Seed::new(18)).unwrap();
        let y = a.matvec(&sig.x1).unwrap();
        assert!(matches!(
            exhaustive_l0(&a, &y, 2),
            Err(Error::NoSolution(2))
        ));
    }
}
