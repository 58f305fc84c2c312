//! Recovery-guarantee thresholds, error-bound constants, the Gaussian
//! sample-count bound, and the best s-term approximation error.

use super::{rip_constant, STRICTNESS_MARGIN};
use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, sym_eig};
use crate::partial::PartitionedMatrix;
use serde::{Deserialize, Serialize};

/// Strict threshold `δ < √2 - 1` under which l1 minimization provably
/// recovers every sufficiently sparse vector (order `2s` constant).
pub fn recovery_guarantee(delta_2s: f64) -> bool {
    delta_2s < std::f64::consts::SQRT_2 - 1.0 - STRICTNESS_MARGIN
}

/// The error-bound constants of the noisy dense-block estimate:
/// `C1 = ||A1||₂` and `C2 = ||A2⁺||₂ = 1/σ_min(A2)`.
///
/// An empty dense block (`r = 0`) returns `C2 = 0`: there is no `x2` to
/// bound, and the convention keeps the bound's right-hand side zero.
pub fn c1_c2(part: &PartitionedMatrix) -> Result<(f64, f64)> {
    let c1 = spectral_norm(part.a1());
    let r = part.split();
    if r == 0 {
        return Ok((c1, 0.0));
    }
    let eigs = sym_eig(&part.a2().gram())?;
    let lambda_min = *eigs.first().expect("nonempty gram");
    if lambda_min <= 0.0 {
        return Err(Error::RankDeficient {
            rank: 0,
            cols: r,
            context: "dense block singular values",
        });
    }
    Ok((c1, 1.0 / lambda_min.sqrt()))
}

/// Measured slack of the spectral bounds on `C1`, `C2` against the order-`s`
/// restricted-isometry constant of the full matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct C1C2BoundReport {
    pub order: usize,
    pub delta_s: f64,
    pub c1: f64,
    pub c2: f64,
    /// `√(1 + δ_s)`.
    pub c1_bound: f64,
    /// `1/√(1 - δ_s)`; infinite when `δ_s >= 1` (vacuous).
    pub c2_bound: f64,
    pub c1_slack: f64,
    pub c2_slack: f64,
    /// The `C1` bound is only implied by order-`s` isometry when `s` covers
    /// the whole sparse block (`s >= N - r`); below that it is reported as
    /// metadata, not asserted.
    pub c1_order_sufficient: bool,
    pub c1_holds: bool,
    pub c2_holds: bool,
}

/// Verify `C2 <= 1/√(1-δ_s)` (valid whenever `s >= r`) and evaluate
/// `C1 <= √(1+δ_s)`, which is only guaranteed once `s >= N - r`.
pub fn check_c1_c2_bounds(part: &PartitionedMatrix, s: usize) -> Result<C1C2BoundReport> {
    let r = part.split();
    if s < r {
        return Err(Error::DomainError(format!(
            "order {s} is smaller than the split size {r}"
        )));
    }
    let delta_s = rip_constant(part.matrix(), s)?.delta;
    let (c1, c2) = c1_c2(part)?;
    let c1_bound = (1.0 + delta_s).sqrt();
    let c2_bound = if delta_s < 1.0 {
        1.0 / (1.0 - delta_s).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(C1C2BoundReport {
        order: s,
        delta_s,
        c1,
        c2,
        c1_bound,
        c2_bound,
        c1_slack: c1_bound - c1,
        c2_slack: c2_bound - c2,
        c1_order_sufficient: s >= part.cols() - r,
        c1_holds: c1 <= c1_bound + 1e-9,
        c2_holds: c2 <= c2_bound + 1e-9,
    })
}

/// Sample-count threshold for Gaussian measurement ensembles: with
/// `k` exceeding
/// `96/(3δ² - δ³) · ((s-r)·ln((N-r)e/(s-r)) + s·ln(12/δ))`
/// the projected matrix satisfies the order-`(s-r)` isometry property with
/// constant at most `δ`, with high probability. Logarithms are natural; the
/// first term vanishes when `s = r`.
pub fn gaussian_sample_bound(n: usize, s: usize, r: usize, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::DomainError(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    if r > s {
        return Err(Error::DomainError(format!(
            "split size {r} exceeds sparsity {s}"
        )));
    }
    if s >= n {
        return Err(Error::DomainError(format!(
            "sparsity {s} must be smaller than the dimension {n}"
        )));
    }
    let factor = 96.0 / (3.0 * delta * delta - delta * delta * delta);
    let sparse_term = if s == r {
        0.0
    } else {
        let m = (s - r) as f64;
        m * ((n - r) as f64 * std::f64::consts::E / m).ln()
    };
    let pattern_term = s as f64 * (12.0 / delta).ln();
    Ok(factor * (sparse_term + pattern_term))
}

/// l1 distance from `x` to the nearest `s`-sparse vector: the sum of all but
/// the `s` largest magnitudes.
pub fn best_s_term_error(x: &[f64], s: usize) -> f64 {
    if s >= x.len() {
        return 0.0;
    }
    let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
    mags[s..].iter().sum()
}
