//! Command-line front end: one binary, subcommand per capability.
//!
//! Exit codes: 0 on success, 1 on domain errors (infeasible systems,
//! rank-deficient blocks, refused enumerations), 2 on usage errors. With
//! `--json-errors`, domain errors additionally emit a machine-readable JSON
//! object on stderr.

use crate::certificates::{
    gaussian_sample_bound, mixed_rip_constant, nsp_check, partial_nsp_check, partial_rip_constant,
    rip_constant, CertificateDocument,
};
use crate::error::{Error, Result};
use crate::experiments::{
    compare_full_vs_partial, parse_u64, phase_diagram, verify_noisy_bounds, ExperimentConfig,
};
use crate::io;
use crate::partial::{recover_direct, recover_projected, split_matrix, PartialSolution};
use crate::randgen::{
    gaussian_matrix, noise_on_ball, planted_signal, MagnitudeLaw, Seed, SignalModel,
};
use crate::solvers::{admm_bpdn, simplex_l1, SolveOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "partial-l1",
    version,
    about = "Partially sparse recovery: l1 solvers, recovery certificates, experiments"
)]
struct Cli {
    /// Emit machine-readable error JSON on stderr.
    #[arg(long, global = true)]
    json_errors: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize the (weighted) l1 norm subject to the measurements.
    Solve(SolveArgs),
    /// Recover a split signal (sparse block + dense block).
    Recover(RecoverArgs),
    /// Run an exact recovery certificate on a matrix file.
    Certify(CertifyArgs),
    /// Evaluate the Gaussian sample-count bound.
    Bound(BoundArgs),
    /// Generate matrices, signals, or noise deterministically.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Success-rate table over a (k, s, r, eta) grid.
    Phase(ExperimentArgs),
    /// Verify the noisy error bounds on a grid.
    VerifyBounds(ExperimentArgs),
    /// Compare measurement counts with and without a known dense block.
    Compare(ExperimentArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Measurement matrix file (text format: `rows cols`, then rows).
    #[arg(long)]
    matrix: PathBuf,
    /// Measurement vector file (single-column matrix).
    #[arg(long)]
    y: PathBuf,
    /// Noise radius; 0 means exact equality constraints.
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    /// Optional per-coordinate weight vector file.
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MethodArg::Simplex)]
    method: MethodArg,
    /// Write the solution vector here (extension picks text/JSON).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Simplex,
    Splitting,
}

#[derive(Args)]
struct RecoverArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Dense-block size (last r columns).
    #[arg(long)]
    r: usize,
    #[arg(long)]
    y: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    #[arg(long, value_enum, default_value_t = RouteArg::Projected)]
    route: RouteArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Projected,
    Direct,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(value_enum)]
    property: PropertyArg,
    #[arg(long)]
    matrix: PathBuf,
    /// Certificate order: the total sparsity budget s.
    #[arg(long)]
    order: usize,
    /// Dense-block size for the partial/mixed properties.
    #[arg(long, default_value_t = 0)]
    r: usize,
    /// Write the JSON certificate document here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    Nsp,
    PartialNsp,
    Rip,
    PartialRip,
    MixedRip,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    delta: f64,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Gaussian matrix with entry variance 1/k.
    Matrix {
        /// Seed, decimal or 0x-hex.
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Planted split signal; optionally also the measurement vector.
    Signal {
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        /// Sparse-block length (N - r).
        #[arg(long)]
        n_minus_r: usize,
        /// Nonzeros in the sparse block.
        #[arg(long)]
        sparsity: usize,
        #[arg(long, default_value_t = 0)]
        r: usize,
        /// `unit` or `lo..hi`.
        #[arg(long, default_value = "0.5..2")]
        magnitude: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Matrix to measure the signal with (writes y to --y-out).
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        y_out: Option<PathBuf>,
        /// Noise radius added to y when a matrix is given.
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        /// Put the noise on the sphere rather than inside the ball.
        #[arg(long)]
        boundary: bool,
    },
    /// Noise of l2 norm at most (or exactly) eta.
    Noise {
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        boundary: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// Flat key = value configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Write the results table here (.json for the JSON mirror, CSV otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for trial execution.
    #[arg(long)]
    threads: Option<usize>,
    /// Include full per-trial records in JSON output.
    #[arg(long)]
    full: bool,
    /// Config overrides, e.g. --set trials_per_cell=50 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

/// Parse `argv` and run. Returns the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version to stdout (exit 0) and usage errors
            // to stderr (exit 2).
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run_command(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            if cli.json_errors {
                let doc = serde_json::json!({ "error": e.code(), "message": e.to_string() });
                eprintln!("{doc}");
            } else {
                eprintln!("error: {e}");
            }
            1
        }
    }
}

/// Entry point used by the binary: parses the real argv.
pub fn run() -> i32 {
    dispatch(std::env::args_os())
}

fn run_command(cmd: Command) -> Result<()> {
    match cmd {
        Command::Solve(args) => cmd_solve(args),
        Command::Recover(args) => cmd_recover(args),
        Command::Certify(args) => cmd_certify(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Gen(gen) => cmd_gen(gen),
        Command::Phase(args) => cmd_experiment(args, ExperimentKind::Phase),
        Command::VerifyBounds(args) => cmd_experiment(args, ExperimentKind::VerifyBounds),
        Command::Compare(args) => cmd_experiment(args, ExperimentKind::Compare),
    }
}

fn parse_seed_flags(seed: &str, stream: u64) -> Result<Seed> {
    Ok(Seed::new(parse_u64(seed)?).with_stream(stream))
}

fn print_vector(label: &str, v: &[f64]) {
    let rendered: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    println!("{label} = [{}]", rendered.join(", "));
}

fn write_vector_output(out: Option<&Path>, v: &[f64]) -> Result<()> {
    if let Some(path) = out {
        if path.extension().is_some_and(|e| e == "json") {
            std::fs::write(path, serde_json::to_string_pretty(v).expect("serializes"))?;
        } else {
            io::write_vector(path, v)?;
        }
    }
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let a = io::read_matrix(&args.matrix)?;
    let y = io::read_vector(&args.y)?;
    let weights = match &args.weights {
        Some(p) => Some(io::read_vector(p)?),
        None => None,
    };
    let opts = SolveOptions {
        weights: weights.clone(),
        ..Default::default()
    };
    let report = match (args.method, args.eta) {
        (MethodArg::Simplex, eta) if eta == 0.0 => {
            let w = opts.weights_or_ones(a.cols());
            simplex_l1(&a, &y, &w)?
        }
        (MethodArg::Simplex, _) => {
            return Err(Error::DomainError(
                "simplex handles eta = 0 only; use --method splitting".into(),
            ))
        }
        (MethodArg::Splitting, eta) => admm_bpdn(&a, &y, eta, &opts)?,
    };
    println!(
        "status = {:?}, objective = {:.10}, iterations = {}, residual = {:.3e}",
        report.status, report.objective, report.iterations, report.primal_residual
    );
    print_vector("x", &report.x);
    write_vector_output(args.out.as_deref(), &report.x)
}

fn cmd_recover(args: RecoverArgs) -> Result<()> {
    let a = io::read_matrix(&args.matrix)?;
    let y = io::read_vector(&args.y)?;
    let part = split_matrix(&a, args.r)?;
    let opts = SolveOptions::default();
    let sol: PartialSolution = match args.route {
        RouteArg::Projected => recover_projected(&part, &y, args.eta, &opts)?,
        RouteArg::Direct => recover_direct(&part, &y, args.eta, &opts)?,
    };
    println!(
        "route = {:?}, objective = {:.10}, solver status = {:?}, x2 residual = {:.3e}",
        sol.route, sol.x1_report.objective, sol.x1_report.status, sol.x2_residual
    );
    print_vector("x1", &sol.x1);
    print_vector("x2", &sol.x2);
    let mut full = sol.x1.clone();
    full.extend_from_slice(&sol.x2);
    write_vector_output(args.out.as_deref(), &full)
}

fn cmd_certify(args: CertifyArgs) -> Result<()> {
    let a = io::read_matrix(&args.matrix)?;
    let doc = match args.property {
        PropertyArg::Nsp => {
            let rep = nsp_check(&a, args.order)?;
            println!(
                "nsp order {}: holds = {}, worst ratio = {:.6}",
                rep.order, rep.holds, rep.worst_ratio
            );
            CertificateDocument::from_nsp("nsp", &rep, &a)
        }
        PropertyArg::PartialNsp => {
            let part = split_matrix(&a, args.r)?;
            let rep = partial_nsp_check(&part, args.order)?;
            println!(
                "partial-nsp order {} (r = {}): holds = {}, worst ratio = {:.6}",
                rep.order, args.r, rep.holds, rep.worst_ratio
            );
            CertificateDocument::from_nsp("partial-nsp", &rep, &a)
        }
        PropertyArg::Rip => {
            let rep = rip_constant(&a, args.order)?;
            println!("rip order {}: delta = {:.6}", rep.order, rep.delta);
            CertificateDocument::from_rip("rip", &rep, &a)
        }
        PropertyArg::PartialRip => {
            let part = split_matrix(&a, args.r)?;
            let rep = partial_rip_constant(&part, args.order)?;
            println!(
                "partial-rip order {} (r = {}): delta = {:.6}",
                rep.order, args.r, rep.delta
            );
            CertificateDocument::from_rip("partial-rip", &rep, &a)
        }
        PropertyArg::MixedRip => {
            let part = split_matrix(&a, args.r)?;
            let rep = mixed_rip_constant(&part, args.order)?;
            println!(
                "mixed-rip order {} (r = {}): delta = {:.6}",
                rep.order, args.r, rep.delta
            );
            CertificateDocument::from_rip("mixed-rip", &rep, &a)
        }
    };
    if let Some(out) = &args.out {
        std::fs::write(out, doc.to_json())?;
    }
    Ok(())
}

fn cmd_bound(args: BoundArgs) -> Result<()> {
    let b = gaussian_sample_bound(args.n, args.s, args.r, args.delta)?;
    println!("{b}");
    Ok(())
}

fn cmd_gen(gen: GenCommand) -> Result<()> {
    match gen {
        GenCommand::Matrix {
            seed,
            stream,
            k,
            n,
            out,
        } => {
            let m = gaussian_matrix(k, n, parse_seed_flags(&seed, stream)?);
            match out {
                Some(path) => io::write_matrix(&path, &m)?,
                None => print!("{}", io::format_matrix(&m)),
            }
        }
        GenCommand::Signal {
            seed,
            stream,
            n_minus_r,
            sparsity,
            r,
            magnitude,
            out,
            matrix,
            y_out,
            eta,
            boundary,
        } => {
            let seed = parse_seed_flags(&seed, stream)?;
            let model = SignalModel {
                magnitude_law: parse_magnitude_flag(&magnitude)?,
                ..Default::default()
            };
            let signal = planted_signal(n_minus_r, sparsity, r, &model, seed)?;
            let full = signal.full();
            match &out {
                Some(path) => io::write_vector(path, &full)?,
                None => print!("{}", io::format_matrix(&crate::DenseMatrix::column(&full)?)),
            }
            if let Some(matrix_path) = matrix {
                let a = io::read_matrix(&matrix_path)?;
                let mut y = a.matvec(&full)?;
                if eta > 0.0 {
                    let noise = noise_on_ball(a.rows(), eta, seed.substream(3), boundary)?;
                    for (yi, ni) in y.iter_mut().zip(&noise) {
                        *yi += ni;
                    }
                }
                match &y_out {
                    Some(path) => io::write_vector(path, &y)?,
                    None => {
                        return Err(Error::DomainError(
                            "--matrix given but no --y-out to write the measurements to".into(),
                        ))
                    }
                }
            }
        }
        GenCommand::Noise {
            seed,
            stream,
            k,
            eta,
            boundary,
            out,
        } => {
            let eps = noise_on_ball(k, eta, parse_seed_flags(&seed, stream)?, boundary)?;
            match out {
                Some(path) => io::write_vector(&path, &eps)?,
                None => print!("{}", io::format_matrix(&crate::DenseMatrix::column(&eps)?)),
            }
        }
    }
    Ok(())
}

fn parse_magnitude_flag(s: &str) -> Result<MagnitudeLaw> {
    if s == "unit" {
        return Ok(MagnitudeLaw::UnitMagnitudeRandomSign);
    }
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: f64 = lo
            .parse()
            .map_err(|e| Error::Parse(format!("bad magnitude `{s}`: {e}")))?;
        let hi: f64 = hi
            .parse()
            .map_err(|e| Error::Parse(format!("bad magnitude `{s}`: {e}")))?;
        return Ok(MagnitudeLaw::UniformInRange { lo, hi });
    }
    Err(Error::Parse(format!(
        "bad magnitude law `{s}` (expected `unit` or `lo..hi`)"
    )))
}

enum ExperimentKind {
    Phase,
    VerifyBounds,
    Compare,
}

fn cmd_experiment(args: ExperimentArgs, kind: ExperimentKind) -> Result<()> {
    let text = std::fs::read_to_string(&args.config)?;
    let mut cfg = ExperimentConfig::from_text(&text)?;
    for ov in &args.overrides {
        let (key, value) = ov.split_once('=').ok_or_else(|| {
            Error::Parse(format!("override `{ov}` must look like key=value"))
        })?;
        cfg.apply(key.trim(), value.trim())?;
    }
    if let Some(t) = args.threads {
        cfg.threads = t;
    }
    cfg.validate()?;

    let (csv, json) = match kind {
        ExperimentKind::Phase => {
            let table = phase_diagram(&cfg)?;
            (table.to_csv(), to_json_value(&table, args.full))
        }
        ExperimentKind::VerifyBounds => {
            let report = verify_noisy_bounds(&cfg)?;
            (report.to_csv(), to_json_value(&report, args.full))
        }
        ExperimentKind::Compare => {
            let table = compare_full_vs_partial(&cfg)?;
            (table.to_csv(), to_json_value(&table, args.full))
        }
    };

    match &args.out {
        None => print!("{csv}"),
        Some(path) if path.extension().is_some_and(|e| e == "json") => {
            std::fs::write(path, serde_json::to_string_pretty(&json).expect("serializes"))?;
        }
        Some(path) => std::fs::write(path, csv)?,
    }
    Ok(())
}

/// Serialize a result table, stripping the per-trial records unless `full`.
fn to_json_value<T: Serialize>(value: &T, full: bool) -> serde_json::Value {
    let mut v = serde_json::to_value(value).expect("serializes");
    if !full {
        if let Some(obj) = v.as_object_mut() {
            obj.remove("records");
        }
    }
    v
}
