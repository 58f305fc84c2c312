//! Serializable certificate documents.

use super::{NspReport, RipReport, ENUMERATION_CAP, STRICTNESS_MARGIN};
use crate::linalg::DenseMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// SHA-256 over the matrix dimensions and raw entry bits, hex-encoded.
/// Stable across runs and across text-format round trips (the writer emits
/// shortest exact decimal representations).
pub fn matrix_hash(m: &DenseMatrix) -> String {
    let mut hasher = Sha256::new();
    hasher.update((m.rows() as u64).to_le_bytes());
    hasher.update((m.cols() as u64).to_le_bytes());
    for v in m.entries() {
        hasher.update(v.to_bits().to_le_bytes());
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToleranceInfo {
    pub strictness_margin: f64,
    pub enumeration_cap: u64,
    /// Logarithm convention used by the sample-count bound.
    pub log_base: String,
}

impl Default for ToleranceInfo {
    fn default() -> Self {
        Self {
            strictness_margin: STRICTNESS_MARGIN,
            enumeration_cap: ENUMERATION_CAP as u64,
            log_base: "natural".to_string(),
        }
    }
}

/// A certificate verdict bound to the matrix it was computed for, ready for
/// JSON output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub property: String,
    pub order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_support: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_vector: Option<Vec<f64>>,
    pub matrix_hash: String,
    pub tolerances: ToleranceInfo,
}

impl CertificateDocument {
    pub fn from_nsp(property: &str, report: &NspReport, matrix: &DenseMatrix) -> Self {
        Self {
            property: property.to_string(),
            order: report.order,
            holds: Some(report.holds),
            delta: None,
            worst_ratio: Some(report.worst_ratio),
            witness_support: report.witness_support.clone(),
            witness_vector: report.witness_v.clone(),
            matrix_hash: matrix_hash(matrix),
            tolerances: ToleranceInfo::default(),
        }
    }

    pub fn from_rip(property: &str, report: &RipReport, matrix: &DenseMatrix) -> Self {
        Self {
            property: property.to_string(),
            order: report.order,
            holds: None,
            delta: Some(report.delta),
            worst_ratio: None,
            witness_support: Some(report.witness_support.clone()),
            witness_vector: None,
            matrix_hash: matrix_hash(matrix),
            tolerances: ToleranceInfo::default(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}
