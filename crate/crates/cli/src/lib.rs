//! Command-line front end for `freecomp-core`.
//!
//! Every subcommand prints a JSON envelope `{command, input, result}` on
//! success; numerical failures print `{command, input, error: {kind, message}}`
//! and exit with status 1. Usage errors exit with status 2.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

pub mod commands;
pub mod csv_out;
pub mod error;
pub mod svg;

pub use error::CliError;

/// Comma-separated list of decimals.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct List(pub Vec<f64>);

fn parse_list(s: &str) -> Result<List, String> {
    let values = s
        .split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("`{part}` is not a finite decimal"))
        })
        .collect::<Result<Vec<f64>, String>>()?;
    if values.is_empty() {
        return Err("list is empty".into());
    }
    Ok(List(values))
}

fn parse_t(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|_| format!("`{s}` is not a decimal"))?;
    if t > 0.0 && t <= 1.0 {
        Ok(t)
    } else {
        Err(format!("t must lie in (0, 1], got {s}"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a decimal"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a positive decimal, got {s}"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "freecomp", version, about = "(t)-norms, free compressions and random subspace experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// (t)-norm of a vector, with its gradient in the smooth regime
    Tnorm(TnormArgs),
    /// (t)-norms of the flat vectors 1^j 0^(k-j), j = 1..k
    Flat(FlatArgs),
    /// Exposed points of K_{k,t} for random chamber directions
    Boundary(BoundaryArgs),
    /// Law of the compression of diag(vector) by a free projection of trace t
    Density(DensityArgs),
    /// Membership of a Schmidt vector in K_{k,t} and in L_{k,t}
    Kcheck(KcheckArgs),
    /// The vector beta^(t) defining L_{k,t}
    Beta(BetaArgs),
    /// Schmidt statistics of eigenvectors of compressed diag(a) ⊗ I
    Simulate(SimulateArgs),
    /// Operator norm of A U B U* for Haar U
    ProductSim(ProductSimArgs),
    /// SVG picture of K_{k,t} and L_{k,t} for k = 2 or 3
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Output {
    /// Write the output to PATH instead of standard output
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TnormArgs {
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub vector: List,
    #[arg(long, value_parser = parse_t)]
    pub t: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FlatArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_parser = parse_t)]
    pub t: f64,
    #[arg(long)]
    pub csv: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundaryArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_parser = parse_t)]
    pub t: f64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub csv: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DensityArgs {
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub vector: List,
    #[arg(long, value_parser = parse_t)]
    pub t: f64,
    /// Number of evaluation points across the support
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    #[arg(long, value_parser = parse_positive, default_value_t = freecomp_core::convolve::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long)]
    pub csv: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KcheckArgs {
    #[arg(long, value_parser = parse_list)]
    pub lambda: List,
    #[arg(long, value_parser = parse_t)]
    pub t: f64,
    /// Expected dimension; defaults to the length of --lambda
    #[arg(long)]
    pub k: Option<usize>,
    /// Lattice resolution of the direction search
    #[arg(long, default_value_t = freecomp_core::geometry::DEFAULT_GRID_DEPTH)]
    pub grid: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BetaArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_parser = parse_t)]
    pub t: f64,
    #[arg(long)]
    pub csv: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    /// Diagonal of A, strictly decreasing
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub vector: List,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_parser = parse_t)]
    pub t: f64,
    /// Eigenvalue rank, counted from the top; defaults to floor(sqrt(n))
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub csv: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProductSimArgs {
    /// Eigenvalues of A (each repeated n / len times)
    #[arg(long, value_parser = parse_list)]
    pub vector: List,
    /// Eigenvalues of B; a projection of trace --t when omitted
    #[arg(long, value_parser = parse_list, conflicts_with = "t", required_unless_present = "t")]
    pub lambda: Option<List>,
    #[arg(long, value_parser = parse_t)]
    pub t: Option<f64>,
    /// Matrix dimension
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub csv: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PlotArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_parser = parse_t)]
    pub t: f64,
    #[arg(long, default_value_t = 300)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    /// Add the Schmidt vectors of random unit vectors of a random subspace of C^k ⊗ C^n
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Tnorm(_) => "tnorm",
            Command::Flat(_) => "flat",
            Command::Boundary(_) => "boundary",
            Command::Density(_) => "density",
            Command::Kcheck(_) => "kcheck",
            Command::Beta(_) => "beta",
            Command::Simulate(_) => "simulate",
            Command::ProductSim(_) => "product-sim",
            Command::Plot(_) => "plot",
        }
    }

    fn input(&self) -> Value {
        let value = match self {
            Command::Tnorm(a) => serde_json::to_value(a),
            Command::Flat(a) => serde_json::to_value(a),
            Command::Boundary(a) => serde_json::to_value(a),
            Command::Density(a) => serde_json::to_value(a),
            Command::Kcheck(a) => serde_json::to_value(a),
            Command::Beta(a) => serde_json::to_value(a),
            Command::Simulate(a) => serde_json::to_value(a),
            Command::ProductSim(a) => serde_json::to_value(a),
            Command::Plot(a) => serde_json::to_value(a),
        };
        value.unwrap_or(Value::Null)
    }

    fn output_path(&self) -> Option<&PathBuf> {
        let output = match self {
            Command::Tnorm(a) => &a.output,
            Command::Flat(a) => &a.output,
            Command::Boundary(a) => &a.output,
            Command::Density(a) => &a.output,
            Command::Kcheck(a) => &a.output,
            Command::Beta(a) => &a.output,
            Command::Simulate(a) => &a.output,
            Command::ProductSim(a) => &a.output,
            Command::Plot(a) => &a.output,
        };
        output.out.as_ref()
    }

    fn threads(&self) -> Option<usize> {
        match self {
            Command::Simulate(a) => a.threads,
            Command::ProductSim(a) => a.threads,
            _ => None,
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return e.exit_code();
        }
    };
    let command = cli.command;
    log::debug!("running {}", command.name());

    let result = match command.threads() {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| commands::execute(&command)),
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot start {threads} worker threads: {e}");
                return 2;
            }
        },
        None => commands::execute(&command),
    };

    let bytes = match result {
        Ok(commands::Payload::Json(result)) => envelope(json!({
            "command": command.name(),
            "input": command.input(),
            "result": result,
        })),
        Ok(commands::Payload::Raw(bytes)) => bytes,
        Err(e) => {
            log::warn!("{} failed: {e}", command.name());
            let report = envelope(json!({
                "command": command.name(),
                "input": command.input(),
                "error": { "kind": e.kind(), "message": e.to_string() },
            }));
            let _ = stdout.write_all(&report);
            return 1;
        }
    };

    let written = match command.output_path() {
        Some(path) => std::fs::write(path, &bytes),
        None => stdout.write_all(&bytes),
    };
    if let Err(e) = written {
        let report = envelope(json!({
            "command": command.name(),
            "input": command.input(),
            "error": { "kind": "io_error", "message": e.to_string() },
        }));
        let _ = stdout.write_all(&report);
        return 1;
    }
    0
}

fn envelope(value: Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(&value).expect("JSON values always serialize");
    bytes.push(b'\n');
    bytes
}
