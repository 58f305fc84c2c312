//! Null-space property checks via exact linear programming.
//!
//! For a support `S` and sign pattern `σ`, the largest value of
//! `σᵀ(v_S)` over null-space vectors with `||v||₁ <= 1` is a linear program;
//! maximizing over all supports and sign patterns yields the worst l1 mass
//! any `s` coordinates can capture. The property of order `s` holds exactly
//! when that worst ratio stays strictly below one half.

use super::{binomial, check_cap, NspReport, STRICTNESS_MARGIN};
use crate::error::{Error, Result};
use crate::linalg::{norm1, null_space_basis_auto, DenseMatrix};
use crate::partial::PartitionedMatrix;
use crate::solvers::solve_standard_form;
use itertools::Itertools;

/// Check the null-space property of order `s` for `A`.
///
/// Enumerates every support in `[N]^(s)` and every sign pattern on it; each
/// subproblem is solved exactly by simplex over the polytope
/// `{v = B z : ||v||₁ <= 1}` written in standard form. A trivial null space
/// passes vacuously. Ties between witnesses go to the lexicographically
/// smallest support.
pub fn nsp_check(a: &DenseMatrix, s: usize) -> Result<NspReport> {
    let n = a.cols();
    if s > n {
        return Err(Error::DomainError(format!(
            "order must satisfy s <= {n}, got {s}"
        )));
    }
    check_cap(binomial(n, s).saturating_mul(1u128 << s.min(127)))?;

    let basis = null_space_basis_auto(a);
    let d = basis.cols();
    if d == 0 || s == 0 {
        return Ok(NspReport {
            holds: true,
            order: s,
            worst_ratio: 0.0,
            witness_v: None,
            witness_support: None,
        });
    }

    // Standard-form constraints shared by every subproblem, over variables
    // (z⁺, z⁻, p, q, t): B(z⁺-z⁻) = p - q and sum(p+q) + t = 1.
    let total = 2 * d + 2 * n + 1;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut row = vec![0.0; total];
        for j in 0..d {
            row[j] = basis.get(i, j);
            row[d + j] = -basis.get(i, j);
        }
        row[2 * d + i] = -1.0;
        row[2 * d + n + i] = 1.0;
        rows.push(row);
    }
    let mut budget = vec![0.0; total];
    for i in 0..n {
        budget[2 * d + i] = 1.0;
        budget[2 * d + n + i] = 1.0;
    }
    budget[2 * d + 2 * n] = 1.0;
    rows.push(budget);
    let constraints = DenseMatrix::from_rows(&rows)?;
    let mut rhs = vec![0.0; n];
    rhs.push(1.0);

    let mut worst_ratio = 0.0f64;
    let mut witness: Option<(Vec<f64>, Vec<usize>)> = None;

    for support in (0..n).combinations(s) {
        for pattern in 0u64..(1u64 << s) {
            let mut objective = vec![0.0; total];
            for (bit, &i) in support.iter().enumerate() {
                let sigma = if (pattern >> bit) & 1 == 0 { 1.0 } else { -1.0 };
                // Maximize σᵀ(p - q)_S, i.e. minimize its negation.
                objective[2 * d + i] = -sigma;
                objective[2 * d + n + i] = sigma;
            }
            let sol = solve_standard_form(&constraints, &rhs, &objective)?;
            let ratio = -sol.objective;
            if ratio > worst_ratio {
                worst_ratio = ratio;
                let v: Vec<f64> = (0..n)
                    .map(|i| sol.x[2 * d + i] - sol.x[2 * d + n + i])
                    .collect();
                let l1 = norm1(&v);
                let normalized = if l1 > 0.0 {
                    v.iter().map(|x| x / l1).collect()
                } else {
                    v
                };
                witness = Some((normalized, support.clone()));
            }
        }
    }

    let holds = worst_ratio < 0.5 - STRICTNESS_MARGIN;
    let (witness_v, witness_support) = if holds {
        (None, None)
    } else {
        match witness {
            Some((v, s)) => (Some(v), Some(s)),
            None => (None, None),
        }
    };
    Ok(NspReport {
        holds,
        order: s,
        worst_ratio,
        witness_v,
        witness_support,
    })
}

/// Check the null-space property of order `s - r` for partially sparse
/// recovery: the vectors `v1` with `A1 v1 ∈ range(A2)` are exactly the null
/// space of `P A1`, so this runs [`nsp_check`] on the projected matrix.
/// The dense block's column rank was already validated by the partition.
/// The degenerate order `s = r` holds vacuously.
pub fn partial_nsp_check(part: &PartitionedMatrix, s: usize) -> Result<NspReport> {
    let r = part.split();
    if s < r {
        return Err(Error::DomainError(format!(
            "order {s} is smaller than the split size {r}"
        )));
    }
    if s == r {
        return Ok(NspReport {
            holds: true,
            order: 0,
            worst_ratio: 0.0,
            witness_v: None,
            witness_support: None,
        });
    }
    nsp_check(part.projected_a1(), s - r)
}
