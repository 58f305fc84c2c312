//! Exact desk-scale certificates for sparse and partially sparse recovery.
//!
//! Everything here is exhaustive: restricted-isometry constants enumerate
//! every support, null-space checks solve one linear program per support and
//! sign pattern, and the l0 oracle tries every support by increasing size.
//! When an enumeration would exceed the cap the functions refuse with
//! [`Error::TooLarge`](crate::error::Error::TooLarge) instead of silently
//! sampling — a certificate is either exact or absent.

mod bounds;
mod l0;
mod nsp;
mod report;
mod rip;

pub use bounds::{
    best_s_term_error, c1_c2, check_c1_c2_bounds, gaussian_sample_bound, recovery_guarantee,
    C1C2BoundReport,
};
pub use l0::exhaustive_l0;
pub use nsp::{nsp_check, partial_nsp_check};
pub use report::{matrix_hash, CertificateDocument, ToleranceInfo};
pub use rip::{mixed_rip_constant, partial_rip_constant, rip_constant};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Hard cap on the number of enumerated supports (times sign patterns for
/// null-space checks).
pub const ENUMERATION_CAP: u128 = 2_000_000;

/// Margin used when certifying strict inequalities: floating point cannot
/// witness strictness at zero distance.
pub const STRICTNESS_MARGIN: f64 = 1e-9;

/// Binomial coefficient in wide arithmetic, saturating far above any cap.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul((n - i) as u128) / (i as u128 + 1);
        if num > u128::MAX / 2 {
            return u128::MAX;
        }
    }
    num
}

pub(crate) fn check_cap(count: u128) -> Result<()> {
    if count > ENUMERATION_CAP {
        Err(Error::TooLarge {
            count,
            cap: ENUMERATION_CAP,
        })
    } else {
        Ok(())
    }
}

/// Verdict of a null-space-style check of a given order.
///
/// `worst_ratio` is the largest l1 mass any order-sized support can capture
/// from a unit-l1-norm null-space vector; the property holds when it stays
/// strictly below one half. On failure, `witness_v`/`witness_support`
/// reproduce the offending ratio.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NspReport {
    pub holds: bool,
    pub order: usize,
    pub worst_ratio: f64,
    pub witness_v: Option<Vec<f64>>,
    pub witness_support: Option<Vec<usize>>,
}

/// An exhaustively computed restricted-isometry constant of a given order,
/// with the support attaining the extreme eigenvalue deviation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RipReport {
    pub order: usize,
    pub delta: f64,
    pub witness_support: Vec<usize>,
    pub extreme_eigenvalue: f64,
}
