//! Orthogonal projection onto the complement of a column space.

use super::qr::{qr_factor_auto, QrFactorization};
use super::DenseMatrix;
use crate::error::{Error, Result};

/// Orthogonal projector `P = I - A2 (A2ᵀ A2)⁻¹ A2ᵀ` annihilating the range
/// of a full-column-rank block `A2`, together with the cached factorization
/// used to apply `A2⁺`.
///
/// `P` is computed from the QR factorization of `A2` (never by forming the
/// normal-equation inverse): with `A2 = Q1 R`, `P = I - Q1 Q1ᵀ`.
#[derive(Debug, Clone)]
pub struct Projector {
    p: DenseMatrix,
    a2_pseudo: QrFactorization,
}

impl Projector {
    /// The dense `k x k` projection matrix.
    pub fn matrix(&self) -> &DenseMatrix {
        &self.p
    }

    /// Apply the projector to a vector.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.p.matvec(v)
    }

    /// `A2⁺ b`: least-squares solve against the dense block, using the
    /// factorization cached at construction.
    pub fn solve_dense_block(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.a2_pseudo.solve_least_squares(b)
    }

    /// Ambient dimension `k`.
    pub fn dim(&self) -> usize {
        self.p.rows()
    }
}

/// Build the orthogonal projector onto `range(A2)^⊥`.
///
/// A zero-column `A2` yields the identity projector (nothing to annihilate).
pub fn build_projector(a2: &DenseMatrix) -> Result<Projector> {
    let k = a2.rows();
    let r = a2.cols();
    let f = qr_factor_auto(a2);
    if f.rank < r {
        return Err(Error::RankDeficient {
            rank: f.rank,
            cols: r,
            context: "projector block",
        });
    }
    let mut p = DenseMatrix::identity(k);
    // P = I - Q1 Q1ᵀ with Q1 the orthonormal column basis.
    for i in 0..k {
        for j in 0..k {
            let mut s = 0.0;
            for c in 0..r {
                s += f.q.get(i, c) * f.q.get(j, c);
            }
            let v = p.get(i, j) - s;
            p.set(i, j, v);
        }
    }
    Ok(Projector { p, a2_pseudo: f })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_aligned_column() {
        let a2 = DenseMatrix::column(&[1.0, 0.0]).unwrap();
        let proj = build_projector(&a2).unwrap();
        let expected = DenseMatrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(proj.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn orthonormal_columns_simplify() {
        // A2 with orthonormal columns: P = I - A2 A2ᵀ.
        let inv_sqrt2 = 0.5_f64.sqrt();
        let a2 = DenseMatrix::from_rows(&[
            vec![inv_sqrt2, 0.0],
            vec![inv_sqrt2, 0.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let proj = build_projector(&a2).unwrap();
        let aat = a2.matmul(&a2.transpose()).unwrap();
        let mut expected = DenseMatrix::identity(3);
        for i in 0..3 {
            for j in 0..3 {
                expected.set(i, j, expected.get(i, j) - aat.get(i, j));
            }
        }
        assert!(proj.matrix().max_abs_diff(&expected) < 1e-10);
    }

    #[test]
    fn random_block_invariants() {
        let mut state = 5u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let a2 = DenseMatrix::new(10, 3, (0..30).map(|_| next()).collect()).unwrap();
        let proj = build_projector(&a2).unwrap();
        let p = proj.matrix();

        let p2 = p.matmul(p).unwrap();
        assert!(p2.max_abs_diff(p) <= 1e-9, "idempotence");
        assert!(p.max_abs_diff(&p.transpose()) <= 1e-10, "symmetry");
        let pa2 = p.matmul(&a2).unwrap();
        assert!(pa2.max_abs() <= 1e-9, "annihilates the block range");
    }

    #[test]
    fn dependent_columns_rejected() {
        let a2 = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]]).unwrap();
        assert!(matches!(
            build_projector(&a2),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn empty_block_gives_identity() {
        let a2 = DenseMatrix::zeros(4, 0);
        let proj = build_projector(&a2).unwrap();
        assert!(proj.matrix().max_abs_diff(&DenseMatrix::identity(4)) == 0.0);
        assert_eq!(proj.solve_dense_block(&[1.0, 2.0, 3.0, 4.0]).unwrap(), Vec::<f64>::new());
    }
}
