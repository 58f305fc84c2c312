//! Experiment configuration: flat `key = value` files with comma-separated
//! lists, plus programmatic overrides (the CLI's `--set key=value`).

use crate::error::{Error, Result};
use crate::randgen::{MagnitudeLaw, Seed, SignalModel};
use crate::solvers::{SolveMethod, SolveOptions};
use serde::{Deserialize, Serialize};

/// Full description of an experiment grid.
///
/// A cell is one `(k, n, s, r, eta)` combination; `s` is the total sparsity
/// budget, of which `r` coordinates are covered by the dense block, so the
/// planted sparse block carries `s - r` nonzeros. Grid combinations with
/// `r > s`, `r > k`, or `s > n` are skipped by the drivers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub r_values: Vec<usize>,
    pub s_values: Vec<usize>,
    pub k_values: Vec<usize>,
    pub eta_values: Vec<f64>,
    pub trials_per_cell: usize,
    /// Relative l2 error on the sparse block below which a trial counts as
    /// a successful recovery.
    pub success_threshold: f64,
    pub base_seed: Seed,
    pub signal_model: SignalModel,
    pub solver_opts: SolveOptions,
    /// Draw noise on the sphere of radius eta (worst case) rather than
    /// inside the ball.
    pub noise_boundary: bool,
    /// Run the partial null-space certificate on every drawn matrix and
    /// record the verdict per trial.
    pub certify: bool,
    /// Success level used when extracting minimal measurement counts.
    pub target_success_rate: f64,
    /// Isometry constant fed to the analytic sample-count bound columns.
    pub delta: f64,
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 40,
            r_values: vec![0],
            s_values: vec![3],
            k_values: vec![20],
            eta_values: vec![0.0],
            trials_per_cell: 20,
            success_threshold: 1e-4,
            base_seed: Seed::new(1),
            signal_model: SignalModel::default(),
            solver_opts: SolveOptions::default(),
            noise_boundary: true,
            certify: false,
            target_success_rate: 0.9,
            delta: 0.5,
            threads: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.r_values.is_empty()
            || self.s_values.is_empty()
            || self.k_values.is_empty()
            || self.eta_values.is_empty()
        {
            return Err(Error::DomainError("all grids must be nonempty".into()));
        }
        if self.trials_per_cell == 0 {
            return Err(Error::DomainError("trials_per_cell must be >= 1".into()));
        }
        if !(self.success_threshold > 0.0) {
            return Err(Error::DomainError("success_threshold must be > 0".into()));
        }
        if !(self.target_success_rate > 0.0 && self.target_success_rate <= 1.0) {
            return Err(Error::DomainError(
                "target_success_rate must lie in (0, 1]".into(),
            ));
        }
        if self.eta_values.iter().any(|e| !(*e >= 0.0) || !e.is_finite()) {
            return Err(Error::DomainError("eta values must be nonnegative".into()));
        }
        if self.threads == 0 {
            return Err(Error::DomainError("threads must be >= 1".into()));
        }
        self.signal_model.validate()?;
        self.solver_opts.validate(0)?;
        Ok(())
    }

    /// Parse a flat key-value text (`key = value` lines, `#` comments) on
    /// top of the defaults.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            cfg.apply(key.trim(), value.trim())
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Apply a single `key = value` override.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "n" => self.n = parse(value)?,
            "r_values" => self.r_values = parse_list(value)?,
            "s_values" => self.s_values = parse_list(value)?,
            "k_values" => self.k_values = parse_list(value)?,
            "eta_values" => self.eta_values = parse_list(value)?,
            "trials_per_cell" => self.trials_per_cell = parse(value)?,
            "success_threshold" => self.success_threshold = parse(value)?,
            "seed" => self.base_seed = Seed::new(parse_u64(value)?),
            "stream" => self.base_seed.stream = parse_u64(value)?,
            "magnitude" => self.signal_model.magnitude_law = parse_magnitude(value)?,
            "noise_boundary" => self.noise_boundary = parse_bool(value)?,
            "certify" => self.certify = parse_bool(value)?,
            "target_success_rate" => self.target_success_rate = parse(value)?,
            "delta" => self.delta = parse(value)?,
            "threads" => self.threads = parse(value)?,
            "max_iters" => self.solver_opts.max_iters = parse(value)?,
            "abs_tol" => self.solver_opts.abs_tol = parse(value)?,
            "rel_tol" => self.solver_opts.rel_tol = parse(value)?,
            "penalty" => self.solver_opts.penalty = parse(value)?,
            "adaptive_penalty" => self.solver_opts.adaptive_penalty = parse_bool(value)?,
            "method" => {
                self.solver_opts.method = match value {
                    "auto" => SolveMethod::Auto,
                    "simplex" => SolveMethod::Simplex,
                    "splitting" => SolveMethod::Splitting,
                    other => {
                        return Err(Error::Parse(format!(
                            "unknown method `{other}` (auto|simplex|splitting)"
                        )))
                    }
                }
            }
            other => return Err(Error::Parse(format!("unknown key `{other}`"))),
        }
        Ok(())
    }
}

/// 64-bit integer, decimal or `0x`-prefixed hex.
pub fn parse_u64(s: &str) -> Result<u64> {
    let s = s.trim();
    let parsed = if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        s.parse()
    };
    parsed.map_err(|e| Error::Parse(format!("bad 64-bit integer `{s}`: {e}")))
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad value `{s}`: {e}")))
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',').map(|tok| parse(tok)).collect()
}

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Error::Parse(format!("bad boolean `{other}`"))),
    }
}

/// `unit` or `lo..hi`.
fn parse_magnitude(s: &str) -> Result<MagnitudeLaw> {
    let s = s.trim();
    if s == "unit" {
        return Ok(MagnitudeLaw::UnitMagnitudeRandomSign);
    }
    if let Some((lo, hi)) = s.split_once("..") {
        return Ok(MagnitudeLaw::UniformInRange {
            lo: parse(lo)?,
            hi: parse(hi)?,
        });
    }
    Err(Error::Parse(format!(
        "bad magnitude law `{s}` (expected `unit` or `lo..hi`)"
    )))
}
