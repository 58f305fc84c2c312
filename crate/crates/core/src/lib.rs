//! Partially sparse recovery toolkit.
//!
//! Recovers a split unknown `x = (x1, x2)` from linear measurements
//! `y = A1 x1 + A2 x2 (+ noise)` by minimizing the l1 norm of the sparse
//! block `x1` only, and provides everything needed to study when that works:
//!
//! - [`linalg`] — dense QR/least-squares/eigenvalue kernel,
//! - [`solvers`] — exact simplex and operator-splitting l1 engines,
//! - [`partial`] — the split–project–recover pipeline and its direct
//!   (unreduced) cross-check,
//! - [`certificates`] — exhaustive desk-scale verification of null-space and
//!   restricted-isometry style recovery conditions, with witnesses,
//! - [`randgen`] — seedable Gaussian ensembles, planted signals, bounded noise,
//! - [`experiments`] — phase-transition sweeps and error-bound verification,
//! - [`io`] — the shared matrix text format, CSV tables, JSON reports,
//! - [`cli`] — the `partial-l1` command-line front end.
//!
//! Start with the runnable examples (`cargo run --example partial_recovery`)
//! for end-to-end tours of the API.

pub mod certificates;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod io;
pub mod linalg;
pub mod partial;
pub mod randgen;
pub mod solvers;

pub use error::{Error, Result};
pub use linalg::DenseMatrix;
pub use partial::{PartialSolution, PartitionedMatrix};
pub use randgen::Seed;
pub use solvers::{SolveOptions, SolveReport};
