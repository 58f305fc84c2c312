//! Restricted-isometry constants by exhaustive support enumeration.

use super::{binomial, check_cap, RipReport};
use crate::error::{Error, Result};
use crate::linalg::{sym_eig, DenseMatrix};
use crate::partial::PartitionedMatrix;
use itertools::Itertools;

/// Eigenvalue deviation of a Gram matrix from the identity:
/// `max(λ_max - 1, 1 - λ_min)`.
fn gram_deviation(gram: &DenseMatrix) -> Result<(f64, f64)> {
    let eigs = sym_eig(gram)?;
    let lo = *eigs.first().expect("nonempty gram");
    let hi = *eigs.last().expect("nonempty gram");
    let dev_hi = hi - 1.0;
    let dev_lo = 1.0 - lo;
    if dev_hi >= dev_lo {
        Ok((dev_hi, hi))
    } else {
        Ok((dev_lo, lo))
    }
}

/// The order-`s` restricted-isometry constant of `A`: the smallest `δ` with
/// `(1-δ)||x||² <= ||Ax||² <= (1+δ)||x||²` for every `s`-sparse `x`,
/// computed as the worst eigenvalue deviation over all `s`-column Gram
/// submatrices. Ties go to the lexicographically smallest support.
pub fn rip_constant(a: &DenseMatrix, s: usize) -> Result<RipReport> {
    let n = a.cols();
    if s == 0 || s > n {
        return Err(Error::DomainError(format!(
            "order must satisfy 1 <= s <= {n}, got {s}"
        )));
    }
    check_cap(binomial(n, s))?;

    let mut delta = f64::NEG_INFINITY;
    let mut witness_support = Vec::new();
    let mut extreme = f64::NAN;
    for support in (0..n).combinations(s) {
        let sub = a.select_columns(&support);
        let (dev, eig) = gram_deviation(&sub.gram())?;
        if dev > delta {
            delta = dev;
            witness_support = support;
            extreme = eig;
        }
    }
    Ok(RipReport {
        order: s,
        delta: delta.max(0.0),
        witness_support,
        extreme_eigenvalue: extreme,
    })
}

/// The partial restricted-isometry constant of order `s - r`: the RIP
/// constant of the projected matrix `P A1`. The degenerate order `s = r`
/// returns zero (only the zero vector qualifies).
pub fn partial_rip_constant(part: &PartitionedMatrix, s: usize) -> Result<RipReport> {
    let r = part.split();
    if s < r {
        return Err(Error::DomainError(format!(
            "order {s} is smaller than the split size {r}"
        )));
    }
    if s == r {
        return Ok(RipReport {
            order: 0,
            delta: 0.0,
            witness_support: Vec::new(),
            extreme_eigenvalue: 1.0,
        });
    }
    rip_constant(part.projected_a1(), s - r)
}

/// The smallest `δ` for which the two-sided isometry inequality holds over
/// all vectors whose sparse block is `(s-r)`-sparse and whose dense block is
/// unrestricted: the worst Gram deviation of `[A1|_S, A2]` over supports
/// `S` of size `s - r`.
pub fn mixed_rip_constant(part: &PartitionedMatrix, s: usize) -> Result<RipReport> {
    let r = part.split();
    let n1 = part.cols() - r;
    if s < r {
        return Err(Error::DomainError(format!(
            "order {s} is smaller than the split size {r}"
        )));
    }
    if s == 0 || s - r > n1 {
        return Err(Error::DomainError(format!(
            "order must satisfy max(1, r) <= s <= {}, got {s}",
            n1 + r
        )));
    }
    check_cap(binomial(n1, s - r))?;

    let mut delta = f64::NEG_INFINITY;
    let mut witness_support = Vec::new();
    let mut extreme = f64::NAN;
    for support in (0..n1).combinations(s - r) {
        let sparse_cols = part.a1().select_columns(&support);
        let sub = sparse_cols.hcat(part.a2())?;
        let (dev, eig) = gram_deviation(&sub.gram())?;
        if dev > delta {
            delta = dev;
            witness_support = support;
            extreme = eig;
        }
    }
    Ok(RipReport {
        order: s,
        delta: delta.max(0.0),
        witness_support,
        extreme_eigenvalue: extreme,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partial::split_matrix;

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
    fn orthonormal_columns_have_zero_delta() {
        let a = DenseMatrix::identity(5);
        for s in 1..=5 {
            let rep = rip_constant(&a, s).unwrap();
            assert!(rep.delta <= 1e-12, "s={s}: {}", rep.delta);
        }
    }

    #[test]
    fn duplicated_column_forces_delta_one() {
        // Gram of [1, 1] is all-ones with eigenvalues {0, 2}.
        let a = DenseMatrix::new(1, 2, vec![1.0, 1.0]).unwrap();
        let rep = rip_constant(&a, 2).unwrap();
        assert!((rep.delta - 1.0).abs() < 1e-12);
        assert_eq!(rep.witness_support, vec![0, 1]);
    }

    #[test]
    fn pairwise_closed_form_oracle() {
        // Independent 2x2 eigenvalue formula applied to every column pair.
        let a = test_matrix(8, 16, 404);
        let rep = rip_constant(&a, 2).unwrap();
        let mut expected = f64::NEG_INFINITY;
        for i in 0..16 {
            for j in i + 1..16 {
                let ci = a.col_vec(i);
                let cj = a.col_vec(j);
                let aa = crate::linalg::dot(&ci, &ci);
                let bb = crate::linalg::dot(&cj, &cj);
                let cc = crate::linalg::dot(&ci, &cj);
                let mid = (aa + bb) / 2.0;
                let rad = (((aa - bb) / 2.0).powi(2) + cc * cc).sqrt();
                expected = expected.max((mid + rad - 1.0).max(1.0 - (mid - rad)));
            }
        }
        assert!((rep.delta - expected).abs() <= 1e-10);
    }

    #[test]
    fn rip_monotone_in_order() {
        let a = test_matrix(6, 9, 11);
        let mut prev = 0.0;
        for s in 1..=4 {
            let d = rip_constant(&a, s).unwrap().delta;
            assert!(d >= prev - 1e-12, "delta must grow with order");
            prev = d;
        }
    }

    #[test]
    fn partial_rip_of_axis_partition() {
        // A2 = e1, A1 = e2 in R^2: P A1 = e2, delta of order 1 is 0.
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let part = split_matrix(&a, 1).unwrap();
        let rep = partial_rip_constant(&part, 2).unwrap();
        assert_eq!(rep.order, 1);
        assert!(rep.delta <= 1e-12);
    }

    #[test]
    fn zero_split_reduces_to_plain_rip() {
        let a = test_matrix(6, 10, 2024);
        let part = split_matrix(&a, 0).unwrap();
        let plain = rip_constant(&a, 3).unwrap();
        let partial = partial_rip_constant(&part, 3).unwrap();
        let mixed = mixed_rip_constant(&part, 3).unwrap();
        assert!((plain.delta - partial.delta).abs() <= 1e-12);
        assert!((plain.delta - mixed.delta).abs() <= 1e-12);
    }

    #[test]
    fn degenerate_order_equals_split() {
        let a = test_matrix(6, 10, 7);
        let part = split_matrix(&a, 2).unwrap();
        let rep = partial_rip_constant(&part, 2).unwrap();
        assert_eq!(rep.order, 0);
        assert_eq!(rep.delta, 0.0);
    }

    #[test]
    fn sandwich_chain_on_random_instances() {
        // Projected <= mixed <= full, exhaustively, for several draws.
        for seed in 0..8u64 {
            let a = test_matrix(10, 14, 900 + seed);
            let part = match split_matrix(&a, 2) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let s = 4;
            let proj = partial_rip_constant(&part, s).unwrap().delta;
            let mixed = mixed_rip_constant(&part, s).unwrap().delta;
            let full = rip_constant(&a, s).unwrap().delta;
            assert!(proj <= mixed + 1e-9, "seed {seed}: {proj} vs {mixed}");
            assert!(mixed <= full + 1e-9, "seed {seed}: {mixed} vs {full}");
        }
    }

    #[test]
    fn cap_refuses_large_enumerations() {
        let a = test_matrix(4, 60, 1);
        assert!(matches!(
            rip_constant(&a, 10),
            Err(Error::TooLarge { .. })
        ));
    }
}
