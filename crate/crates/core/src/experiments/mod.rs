//! Recovery experiments: phase-transition sweeps, noisy error-bound
//! verification, and full-vs-partial measurement comparisons.
//!
//! Everything is deterministic given the configuration: each trial's seed is
//! a hash of its cell coordinates and trial index, so cells are independent
//! and individually re-runnable, and parallel execution cannot change any
//! result. Output tables are sorted canonically regardless of grid order.

mod config;

pub use config::{parse_u64, ExperimentConfig};

use crate::certificates::{c1_c2, gaussian_sample_bound, partial_nsp_check};
use crate::error::{Error, Result};
use crate::linalg::{add, norm2, sub};
use crate::partial::{recover_projected, split_matrix, PartitionedMatrix};
use crate::randgen::{gaussian_matrix, noise_on_ball, planted_signal, Seed};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::time::Instant;

/// Absolute slack allowed when checking the dense-block error inequality.
pub const X2_BOUND_SLACK: f64 = 1e-8;

const MATRIX_SUBSTREAM: u64 = 1;
const SIGNAL_SUBSTREAM: u64 = 2;
const NOISE_SUBSTREAM: u64 = 3;
const REDRAW_LIMIT: u64 = 8;

/// One grid point: `s` is the total sparsity budget, of which the dense
/// block accounts for `r`, so the planted sparse block has `s - r` nonzeros.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub k: usize,
    pub n: usize,
    pub s: usize,
    pub r: usize,
    pub eta: f64,
}

impl Cell {
    fn validate(&self) -> Result<()> {
        if self.r > self.s {
            return Err(Error::DomainError(format!(
                "cell has r = {} > s = {}",
                self.r, self.s
            )));
        }
        if self.r > self.k {
            return Err(Error::DomainError(format!(
                "cell has r = {} > k = {}",
                self.r, self.k
            )));
        }
        if self.s > self.n {
            return Err(Error::DomainError(format!(
                "cell has s = {} > n = {}",
                self.s, self.n
            )));
        }
        if !(self.eta >= 0.0) || !self.eta.is_finite() {
            return Err(Error::DomainError(format!("cell has bad eta {}", self.eta)));
        }
        Ok(())
    }

    fn key(&self) -> (usize, usize, usize, usize, u64) {
        (self.k, self.n, self.s, self.r, self.eta.to_bits())
    }
}

/// Deterministic per-trial seed: the base seed pushed through substreams for
/// each cell coordinate (optionally excluding eta, so that an eta sweep can
/// share draws) and the trial index.
pub fn trial_seed(base: Seed, cell: &Cell, include_eta: bool, trial: u64) -> Seed {
    let mut s = base
        .substream(cell.k as u64)
        .substream(cell.n as u64)
        .substream(cell.s as u64)
        .substream(cell.r as u64);
    if include_eta {
        s = s.substream(cell.eta.to_bits());
    }
    s.substream(trial.wrapping_add(0x5EED))
}

/// One recovery experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialRecord {
    pub cell: Cell,
    pub seed: Seed,
    pub err_x1: f64,
    pub err_x2: f64,
    pub success: bool,
    /// Right-hand side of the dense-block error inequality,
    /// `C2 (2 eta + C1 err_x1)`; populated on noisy cells, zero at eta = 0.
    pub bound_rhs_x2: f64,
    pub solver_iterations: usize,
    pub wall_time_ms: f64,
    pub converged: bool,
    /// Partial null-space verdict for the drawn matrix, when certification
    /// was requested.
    pub certified: Option<bool>,
    /// Error description when the trial could not produce a solution.
    pub failure: Option<String>,
}

impl TrialRecord {
    /// The dense-block inequality is checked on converged noisy trials.
    pub fn x2_bound_applicable(&self) -> bool {
        self.failure.is_none() && self.converged && self.cell.eta > 0.0
    }

    pub fn x2_bound_violated(&self) -> bool {
        self.x2_bound_applicable() && self.err_x2 > self.bound_rhs_x2 + X2_BOUND_SLACK
    }
}

fn draw_partition(cell: &Cell, seed: Seed) -> Result<PartitionedMatrix> {
    let mut attempt = 0;
    loop {
        let a = gaussian_matrix(cell.k, cell.n, seed.substream(MATRIX_SUBSTREAM + attempt));
        match split_matrix(&a, cell.r) {
            Ok(part) => return Ok(part),
            Err(e) if attempt < REDRAW_LIMIT => {
                log::warn!("redrawing rank-deficient dense block (attempt {attempt}): {e}");
                attempt += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Run one trial: draw the matrix, plant the signal, add bounded noise,
/// recover through the projected route, and measure everything.
///
/// Deterministic given `(cfg, cell, seed)`. Solver failures are recorded in
/// the returned record rather than raised; only structurally invalid cells
/// error out.
pub fn run_trial(cfg: &ExperimentConfig, cell: Cell, seed: Seed) -> Result<TrialRecord> {
    cell.validate()?;
    let part = draw_partition(&cell, seed)?;
    let signal = planted_signal(
        cell.n - cell.r,
        cell.s - cell.r,
        cell.r,
        &cfg.signal_model,
        seed.substream(SIGNAL_SUBSTREAM),
    )?;
    let noise = noise_on_ball(
        cell.k,
        cell.eta,
        seed.substream(NOISE_SUBSTREAM),
        cfg.noise_boundary,
    )?;
    let y = add(&part.matrix().matvec(&signal.full())?, &noise);

    let certified = if cfg.certify {
        match partial_nsp_check(&part, cell.s) {
            Ok(rep) => Some(rep.holds),
            Err(e) => {
                log::warn!("certification failed: {e}");
                None
            }
        }
    } else {
        None
    };

    let start = Instant::now();
    let outcome = recover_projected(&part, &y, cell.eta, &cfg.solver_opts);
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    let record = match outcome {
        Ok(sol) => {
            let err_x1 = norm2(&sub(&sol.x1, &signal.x1));
            let err_x2 = norm2(&sub(&sol.x2, &signal.x2));
            // The dense-block inequality is only checked on noisy cells, and
            // the spectral constants dominate the cost of large noiseless
            // sweeps, so skip them at eta = 0.
            let bound_rhs_x2 = if cell.eta > 0.0 {
                let (c1, c2) = c1_c2(&part)?;
                c2 * (2.0 * cell.eta + c1 * err_x1)
            } else {
                0.0
            };
            let success = err_x1 <= cfg.success_threshold * (1.0 + norm2(&signal.x1));
            TrialRecord {
                cell,
                seed,
                err_x1,
                err_x2,
                success,
                bound_rhs_x2,
                solver_iterations: sol.x1_report.iterations,
                wall_time_ms,
                converged: sol.x1_report.status == crate::solvers::SolveStatus::Converged,
                certified,
                failure: None,
            }
        }
        Err(e) => TrialRecord {
            cell,
            seed,
            err_x1: f64::INFINITY,
            err_x2: f64::INFINITY,
            success: false,
            bound_rhs_x2: 0.0,
            solver_iterations: 0,
            wall_time_ms,
            converged: false,
            certified,
            failure: Some(e.to_string()),
        },
    };
    Ok(record)
}

/// Interleaved deterministic parallel map: worker `w` handles indices
/// `w, w + threads, ...`, results are reassembled in index order.
fn run_indexed<T: Send>(count: usize, threads: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    if threads <= 1 || count <= 1 {
        return (0..count).map(f).collect();
    }
    let workers = threads.min(count);
    let mut slots: Vec<Option<T>> = (0..count).map(|_| None).collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for w in 0..workers {
            let f = &f;
            handles.push(scope.spawn(move || {
                let mut local = Vec::new();
                let mut i = w;
                while i < count {
                    local.push((i, f(i)));
                    i += workers;
                }
                local
            }));
        }
        for h in handles {
            for (i, v) in h.join().expect("worker panicked") {
                slots[i] = Some(v);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("slot filled")).collect()
}

fn sorted_dedup<T: Copy + PartialOrd>(values: &[T]) -> Vec<T> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("comparable"));
    v.dedup_by(|a, b| a == b);
    v
}

/// Valid cells of the configured grid in canonical (lexicographic) order.
fn enumerate_cells(cfg: &ExperimentConfig) -> Vec<Cell> {
    let mut cells = Vec::new();
    for &k in &sorted_dedup(&cfg.k_values) {
        for &s in &sorted_dedup(&cfg.s_values) {
            for &r in &sorted_dedup(&cfg.r_values) {
                for &eta in &sorted_dedup(&cfg.eta_values) {
                    let cell = Cell {
                        k,
                        n: cfg.n,
                        s,
                        r,
                        eta,
                    };
                    if cell.validate().is_ok() {
                        cells.push(cell);
                    }
                }
            }
        }
    }
    cells.sort_by_key(Cell::key);
    cells
}

fn failed_trial(cell: Cell, seed: Seed, err: &Error) -> TrialRecord {
    TrialRecord {
        cell,
        seed,
        err_x1: f64::INFINITY,
        err_x2: f64::INFINITY,
        success: false,
        bound_rhs_x2: 0.0,
        solver_iterations: 0,
        wall_time_ms: 0.0,
        converged: false,
        certified: None,
        failure: Some(err.to_string()),
    }
}

/// Aggregated row of a phase table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseRow {
    pub cell: Cell,
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    pub mean_err_x1: f64,
    pub mean_err_x2: f64,
    pub bound_violations: usize,
}

/// Phase-diagram output: one aggregated row per cell plus the full trial
/// records behind them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseTable {
    pub rows: Vec<PhaseRow>,
    pub records: Vec<TrialRecord>,
}

impl PhaseTable {
    pub const CSV_HEADER: &'static str =
        "k,n,s,r,eta,trials,successes,rate,mean_err_x1,mean_err_x2,bound_violations";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let c = &row.cell;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                c.k,
                c.n,
                c.s,
                c.r,
                c.eta,
                row.trials,
                row.successes,
                row.rate,
                row.mean_err_x1,
                row.mean_err_x2,
                row.bound_violations
            );
        }
        out
    }
}

fn aggregate(cell: Cell, records: &[TrialRecord]) -> PhaseRow {
    let trials = records.len();
    let successes = records.iter().filter(|t| t.success).count();
    let usable: Vec<&TrialRecord> = records.iter().filter(|t| t.failure.is_none()).collect();
    let mean = |f: &dyn Fn(&TrialRecord) -> f64| -> f64 {
        if usable.is_empty() {
            f64::NAN
        } else {
            usable.iter().map(|t| f(t)).sum::<f64>() / usable.len() as f64
        }
    };
    PhaseRow {
        cell,
        trials,
        successes,
        rate: successes as f64 / trials.max(1) as f64,
        mean_err_x1: mean(&|t| t.err_x1),
        mean_err_x2: mean(&|t| t.err_x2),
        bound_violations: records.iter().filter(|t| t.x2_bound_violated()).count(),
    }
}

/// Success-rate table over the whole configured grid.
pub fn phase_diagram(cfg: &ExperimentConfig) -> Result<PhaseTable> {
    cfg.validate()?;
    let cells = enumerate_cells(cfg);
    if cells.is_empty() {
        return Err(Error::DomainError(
            "grid contains no valid (k, s, r, eta) cells".into(),
        ));
    }
    let trials = cfg.trials_per_cell;
    let jobs: Vec<(Cell, u64)> = cells
        .iter()
        .flat_map(|&c| (0..trials as u64).map(move |t| (c, t)))
        .collect();
    let records = run_indexed(jobs.len(), cfg.threads, |i| {
        let (cell, t) = jobs[i];
        let seed = trial_seed(cfg.base_seed, &cell, true, t);
        run_trial(cfg, cell, seed).unwrap_or_else(|e| failed_trial(cell, seed, &e))
    });
    let rows = cells
        .iter()
        .enumerate()
        .map(|(i, &cell)| aggregate(cell, &records[i * trials..(i + 1) * trials]))
        .collect();
    Ok(PhaseTable { rows, records })
}

/// Least-squares fit of sparse-block error against the noise radius for one
/// `(k, s, r)` group, over trials that share their draws across the radius
/// grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFit {
    pub k: usize,
    pub n: usize,
    pub s: usize,
    pub r: usize,
    /// Fitted slope of err_x1 against eta (the empirical noise constant).
    pub slope: f64,
    /// Fitted intercept; near zero on cells where recovery is certified.
    pub intercept: f64,
    pub points: usize,
    /// Largest err_x1 observed at eta = 0.
    pub eta0_max_err: f64,
    /// Whether every used matrix passed the partial null-space certificate
    /// (absent when certification was off).
    pub all_certified: Option<bool>,
}

/// Output of the noisy-bound verification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub fits: Vec<GroupFit>,
    pub x2_checked: usize,
    pub x2_violations: usize,
    pub records: Vec<TrialRecord>,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str =
        "k,n,s,r,points,slope,intercept,eta0_max_err,all_certified,x2_checked,x2_violations";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for f in &self.fits {
            let certified = match f.all_certified {
                Some(true) => "true",
                Some(false) => "false",
                None => "",
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                f.k,
                f.n,
                f.s,
                f.r,
                f.points,
                f.slope,
                f.intercept,
                f.eta0_max_err,
                certified,
                self.x2_checked,
                self.x2_violations
            );
        }
        out
    }
}

/// Verify the noisy error bounds on the configured grid.
///
/// The dense-block inequality `err_x2 <= C2 (2 eta + C1 err_x1)` is checked
/// on every converged noisy trial. The sparse-block constant is not known in
/// closed form, so the driver fits err_x1 against eta per `(k, s, r)` group
/// — with draws shared across the eta grid so the fit is paired — and
/// reports the slope and intercept. Requires at least three radii including
/// zero.
pub fn verify_noisy_bounds(cfg: &ExperimentConfig) -> Result<BoundReport> {
    cfg.validate()?;
    let etas = sorted_dedup(&cfg.eta_values);
    if etas.len() < 3 || etas[0] != 0.0 {
        return Err(Error::DomainError(
            "noisy-bound verification needs at least three radii including 0".into(),
        ));
    }

    let mut groups = Vec::new();
    for &k in &sorted_dedup(&cfg.k_values) {
        for &s in &sorted_dedup(&cfg.s_values) {
            for &r in &sorted_dedup(&cfg.r_values) {
                let probe = Cell {
                    k,
                    n: cfg.n,
                    s,
                    r,
                    eta: 0.0,
                };
                if probe.validate().is_ok() {
                    groups.push((k, s, r));
                }
            }
        }
    }
    if groups.is_empty() {
        return Err(Error::DomainError("grid contains no valid groups".into()));
    }

    let trials = cfg.trials_per_cell;
    let jobs: Vec<(usize, u64, f64)> = (0..groups.len())
        .flat_map(|g| {
            let etas = etas.clone();
            (0..trials as u64)
                .flat_map(move |t| etas.clone().into_iter().map(move |eta| (g, t, eta)))
        })
        .collect();
    let records = run_indexed(jobs.len(), cfg.threads, |i| {
        let (g, t, eta) = jobs[i];
        let (k, s, r) = groups[g];
        let cell = Cell {
            k,
            n: cfg.n,
            s,
            r,
            eta,
        };
        // Exclude eta from the seed so one trial shares its matrix, plant,
        // and noise direction across the whole radius grid.
        let seed = trial_seed(cfg.base_seed, &cell, false, t);
        run_trial(cfg, cell, seed).unwrap_or_else(|e| failed_trial(cell, seed, &e))
    });

    let per_group = trials * etas.len();
    let mut fits = Vec::new();
    for (g, &(k, s, r)) in groups.iter().enumerate() {
        let slice = &records[g * per_group..(g + 1) * per_group];
        // Every cell of the group must have at least one converged trial.
        for &eta in &etas {
            let ok = slice
                .iter()
                .any(|t| t.cell.eta == eta && t.failure.is_none() && t.converged);
            if !ok {
                return Err(Error::InsufficientData(format!(
                    "cell (k={k}, s={s}, r={r}, eta={eta}) has no converged trials"
                )));
            }
        }
        let usable: Vec<&TrialRecord> = slice
            .iter()
            .filter(|t| {
                t.failure.is_none() && t.converged && (!cfg.certify || t.certified == Some(true))
            })
            .collect();
        if usable.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "group (k={k}, s={s}, r={r}) has too few usable trials"
            )));
        }
        let (slope, intercept) = linear_fit(
            &usable.iter().map(|t| t.cell.eta).collect::<Vec<_>>(),
            &usable.iter().map(|t| t.err_x1).collect::<Vec<_>>(),
        );
        let eta0_max_err = usable
            .iter()
            .filter(|t| t.cell.eta == 0.0)
            .map(|t| t.err_x1)
            .fold(0.0f64, f64::max);
        let all_certified = if cfg.certify {
            Some(slice.iter().all(|t| t.certified == Some(true)))
        } else {
            None
        };
        fits.push(GroupFit {
            k,
            n: cfg.n,
            s,
            r,
            slope,
            intercept,
            points: usable.len(),
            eta0_max_err,
            all_certified,
        });
    }

    let x2_checked = records.iter().filter(|t| t.x2_bound_applicable()).count();
    let x2_violations = records.iter().filter(|t| t.x2_bound_violated()).count();
    Ok(BoundReport {
        fits,
        x2_checked,
        x2_violations,
        records,
    })
}

fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        cov += (xi - mx) * (yi - my);
        var += (xi - mx) * (xi - mx);
    }
    if var == 0.0 {
        (0.0, my)
    } else {
        let slope = cov / var;
        (slope, my - slope * mx)
    }
}

/// Success rate for one measurement count within a comparison sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KRate {
    pub k: usize,
    pub rate: f64,
}

/// Comparison row: minimal measurement count reaching the target success
/// rate for one `(s, r)`, next to the analytic sample-count bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareRow {
    pub s: usize,
    pub r: usize,
    pub target_rate: f64,
    pub k_min_empirical: Option<usize>,
    pub analytic_bound: f64,
    pub rates: Vec<KRate>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareTable {
    pub rows: Vec<CompareRow>,
    pub records: Vec<TrialRecord>,
}

impl CompareTable {
    pub const CSV_HEADER: &'static str = "s,r,target_rate,k_min_empirical,analytic_bound";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let kmin = row.k_min_empirical.map_or(String::new(), |k| k.to_string());
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                row.s, row.r, row.target_rate, kmin, row.analytic_bound
            );
        }
        out
    }
}

/// Sweep measurement counts per `(s, r)` at zero noise and pair the
/// empirical minimal `k` reaching the target success rate with the analytic
/// Gaussian sample-count bound. Requires `r = 0` plus at least one positive
/// `r` in the grid so the comparison is meaningful.
pub fn compare_full_vs_partial(cfg: &ExperimentConfig) -> Result<CompareTable> {
    cfg.validate()?;
    if !cfg.r_values.contains(&0) || !cfg.r_values.iter().any(|&r| r > 0) {
        return Err(Error::DomainError(
            "comparison needs r = 0 and at least one positive r".into(),
        ));
    }

    let trials = cfg.trials_per_cell;
    let ks = sorted_dedup(&cfg.k_values);
    let mut rows = Vec::new();
    let mut all_records = Vec::new();
    for &s in &sorted_dedup(&cfg.s_values) {
        for &r in &sorted_dedup(&cfg.r_values) {
            let cells: Vec<Cell> = ks
                .iter()
                .map(|&k| Cell {
                    k,
                    n: cfg.n,
                    s,
                    r,
                    eta: 0.0,
                })
                .filter(|c| c.validate().is_ok())
                .collect();
            if cells.is_empty() {
                continue;
            }
            let jobs: Vec<(Cell, u64)> = cells
                .iter()
                .flat_map(|&c| (0..trials as u64).map(move |t| (c, t)))
                .collect();
            let records = run_indexed(jobs.len(), cfg.threads, |i| {
                let (cell, t) = jobs[i];
                let seed = trial_seed(cfg.base_seed, &cell, true, t);
                run_trial(cfg, cell, seed).unwrap_or_else(|e| failed_trial(cell, seed, &e))
            });

            let mut rates = Vec::new();
            let mut k_min = None;
            for (i, cell) in cells.iter().enumerate() {
                let slice = &records[i * trials..(i + 1) * trials];
                let rate = slice.iter().filter(|t| t.success).count() as f64 / trials as f64;
                if k_min.is_none() && rate >= cfg.target_success_rate {
                    k_min = Some(cell.k);
                }
                rates.push(KRate { k: cell.k, rate });
            }
            let analytic_bound = gaussian_sample_bound(cfg.n, s, r, cfg.delta)?;
            rows.push(CompareRow {
                s,
                r,
                target_rate: cfg.target_success_rate,
                k_min_empirical: k_min,
                analytic_bound,
                rates,
            });
            all_records.extend(records);
        }
    }
    Ok(CompareTable {
        rows,
        records: all_records,
    })
}
