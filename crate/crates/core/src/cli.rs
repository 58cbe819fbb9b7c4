//! The `girko` command line: one subcommand per experiment or oracle.
//!
//! Exit codes are a stable contract: 0 on success, 2 for usage and validation
//! errors, 3 when an experiment fails at runtime.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::ensemble::{distribution_by_id, sample_matrix, SeedSpec, RADEMACHER};
use crate::error::{Error, Result};
use crate::experiments::{run_qn_convergence, run_radius_sweep, ExperimentConfig, ExperimentKind};
use crate::momentcomb::{exact_trace_moment, wick_limit_moment, MomentQuery};
use crate::recpoly::{minor_sum_coeffs, qn_coeffs, CoefficientSeries};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Largest coefficient discrepancy accepted by `minorcheck`.
pub const MINORCHECK_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "girko", version, about = "Spectral experiments on random matrices with iid entries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral radius and operator norm sweep over a ladder of dimensions.
    Radius(ExperimentArgs),
    /// Distributional comparison of q_n with its limit on a grid.
    Qn(ExperimentArgs),
    /// Exact finite-n and Gaussian-limit moments of normalized cycle sums.
    Moments(MomentArgs),
    /// Checks that minor sums and the trace recurrence give the same coefficients.
    Minorcheck(MinorArgs),
}

/// Flags shared by the two Monte Carlo subcommands; each overrides the
/// corresponding field of `--config`.
#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub dist: Option<String>,
    /// Comma-separated dimensions, ascending.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid point such as `0.3` or `0.5+0.2i`; repeat for several.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Option<Vec<Complex64>>,
    /// Truncation order of the limit series.
    #[arg(long)]
    pub terms: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Record per-trial wall time in the CSV.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentMode {
    Exact,
    Wick,
}

#[derive(Debug, Args, Serialize)]
pub struct MomentArgs {
    #[arg(long)]
    pub ks: String,
    #[arg(long)]
    pub signs: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value = RADEMACHER)]
    pub dist: String,
    #[arg(long, value_enum)]
    pub mode: Option<MomentMode>,
}

#[derive(Debug, Args, Serialize)]
pub struct MinorArgs {
    #[arg(long)]
    pub n: usize,
    /// Highest coefficient order; defaults to n.
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long, default_value = RADEMACHER)]
    pub dist: String,
    #[arg(long)]
    pub seed: u64,
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    s.trim().parse::<Complex64>().map_err(|e| format!("`{s}` is not a complex number: {e}"))
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl ExperimentArgs {
    /// Layers the flags over the config file (or the defaults).
    pub fn resolve(&self, kind: ExperimentKind) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        cfg.experiment = kind;
        if let Some(v) = &self.dist {
            cfg.dist = v.clone();
        }
        if let Some(v) = &self.n {
            cfg.n = v.clone();
        }
        if let Some(v) = self.trials {
            cfg.trials = v;
        }
        if let Some(v) = self.seed {
            cfg.master_seed = Some(v);
        }
        if let Some(v) = &self.z {
            cfg.z = v.clone();
        }
        if let Some(v) = self.terms {
            cfg.terms = Some(v);
        }
        if let Some(v) = self.eps {
            cfg.eps = v;
        }
        if let Some(v) = &self.out {
            cfg.out = Some(v.clone());
        }
        if let Some(v) = self.workers {
            cfg.workers = v;
        }
        cfg.timing |= self.timing;
        if kind == ExperimentKind::Radius && cfg.out.is_none() {
            cfg.out = Some(PathBuf::from("radius.csv"));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn echo<T: Serialize>(value: &T) {
    if let Ok(text) = serde_json::to_string(value) {
        eprintln!("{text}");
    }
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out).map_err(|e| Error::io("<stdout>", e))
}

fn cmd_radius(args: &ExperimentArgs) -> Result<()> {
    let cfg = args.resolve(ExperimentKind::Radius)?;
    echo(&cfg);
    let sweep = run_radius_sweep(&cfg)?;
    print_json(&json!({
        "csv": cfg.out,
        "records": sweep.records.len(),
        "summaries": sweep.summaries,
    }))
}

fn cmd_qn(args: &ExperimentArgs) -> Result<()> {
    let cfg = args.resolve(ExperimentKind::Qn)?;
    echo(&cfg);
    let reports = run_qn_convergence(&cfg)?;
    let value = serde_json::to_value(&reports)?;
    if let Some(path) = &cfg.out {
        let text = serde_json::to_string_pretty(&value)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))?;
    }
    print_json(&value)
}

fn cmd_moments(args: &MomentArgs) -> Result<()> {
    echo(args);
    let query = MomentQuery::parse(&args.ks, &args.signs)?;
    let dist = distribution_by_id(&args.dist)?;
    let want_exact = args.mode != Some(MomentMode::Wick);
    let want_wick = args.mode != Some(MomentMode::Exact);
    let exact = if want_exact {
        let n = args
            .n
            .ok_or_else(|| Error::InvalidArgument("--n is required for exact moments".into()))?;
        Some(exact_trace_moment(&query, n, &dist)?)
    } else {
        None
    };
    let wick = want_wick.then(|| wick_limit_moment(&query, dist.tau()));
    let mut out = json!({ "query": query, "n": args.n, "dist": dist.id() });
    if let Some(e) = exact {
        out["exact"] = json!(pair(e));
    }
    if let Some(w) = wick {
        out["wick"] = json!(pair(w));
    }
    if let (Some(e), Some(w)) = (exact, wick) {
        out["abs_error"] = json!((e - w).norm());
    }
    print_json(&out)
}

fn cmd_minorcheck(args: &MinorArgs) -> Result<()> {
    echo(args);
    let dist = distribution_by_id(&args.dist)?;
    let kmax = args.kmax.unwrap_or(args.n);
    if args.n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let a = sample_matrix(&dist, args.n, SeedSpec::new(args.seed, 0))?;
    let minors = minor_sum_coeffs(&a, kmax)?;
    let newton = qn_coeffs(&a, kmax)?;
    let diff = minors.max_abs_diff(&CoefficientSeries::new(newton.coeffs[..=kmax].to_vec()));
    let pass = diff <= MINORCHECK_TOL;
    print_json(&json!({
        "n": args.n,
        "kmax": kmax,
        "dist": dist.id(),
        "seed": args.seed,
        "max_abs_diff": diff,
        "tolerance": MINORCHECK_TOL,
        "pass": pass,
        "coefficients": minors,
    }))?;
    if pass {
        Ok(())
    } else {
        Err(Error::Experiment(format!(
            "minor sums and trace recurrence differ by {diff:e}"
        )))
    }
}

fn exit_code(err: &Error) -> i32 {
    if err.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_RUNTIME
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Radius(a) => cmd_radius(a),
        Command::Qn(a) => cmd_qn(a),
        Command::Moments(a) => cmd_moments(a),
        Command::Minorcheck(a) => cmd_minorcheck(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
