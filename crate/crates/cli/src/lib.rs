//! Command-line front end for `linembed`.
//!
//! Exit codes: 0 success, 1 input error, 2 cost guard, 3 failed
//! precondition (with a JSON witness on stdout when one exists).

pub mod commands;
pub mod converge;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use linembed::Mode;
use serde::Serialize;

use crate::converge::{ConvergeMode, OrderingKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_COST_GUARD: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

/// A failed command: exit code, message for stderr, optional JSON detail
/// for stdout.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
    pub detail: Option<serde_json::Value>,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
            detail: None,
        }
    }

    pub fn precondition(message: impl Into<String>, detail: Option<serde_json::Value>) -> Self {
        CliError {
            code: EXIT_PRECONDITION,
            message: message.into(),
            detail,
        }
    }
}

impl From<linembed::Error> for CliError {
    fn from(e: linembed::Error) -> Self {
        use linembed::Error::*;
        let code = match e {
            CostGuard { .. } => EXIT_COST_GUARD,
            Precondition(_) | NotConsistent(_) | OutOfRange(_) => EXIT_PRECONDITION,
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
            detail: None,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

pub type CliResult = Result<String, CliError>;

pub(crate) fn to_json<T: Serialize>(value: &T) -> CliResult {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

#[derive(Debug, Parser)]
#[command(
    name = "linembed",
    version,
    about = "Linear embeddability of graphs and graphons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Format {
    /// Emit JSON (the default).
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV with a header row.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Search {
    #[arg(long, default_value = "exact", value_parser = parse_mode)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: linembed::Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gamma*(G) or, with --order, Gamma*(G, <).
    GammaStar {
        graph: PathBuf,
        /// Comma-separated vertex order, first vertex first.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        #[command(flatten)]
        search: Search,
        /// Evaluation budget for the heuristic ordering search.
        #[arg(long, default_value_t = 2000)]
        order_budget: usize,
        #[command(flatten)]
        format: Format,
    },
    /// Gamma(w) with its error band, and optionally Gamma~(w).
    Gamma {
        graphon: PathBuf,
        #[command(flatten)]
        search: Search,
        /// Also minimize over block permutations.
        #[arg(long)]
        tilde: bool,
        /// Blocks used to discretize a boundary graphon.
        #[arg(long, default_value_t = 16)]
        blocks: usize,
        #[command(flatten)]
        format: Format,
    },
    /// Cut norm of a step graphon.
    Cutnorm {
        graphon: PathBuf,
        #[arg(long, default_value = "exact", value_parser = parse_mode)]
        mode: Mode,
        #[arg(long, default_value_t = 16)]
        blocks: usize,
        #[command(flatten)]
        format: Format,
    },
    /// Upper bound on the cut distance over block permutations.
    Cutdist {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value = "exact", value_parser = parse_mode)]
        mode: Mode,
        #[arg(long, default_value_t = 16)]
        blocks: usize,
        #[command(flatten)]
        format: Format,
    },
    /// w-random graphs, or threshold graphs from a cdf.
    Sample {
        /// Step graphon or boundary JSON.
        #[arg(long, conflicts_with = "cdf", required_unless_present = "cdf")]
        graphon: Option<PathBuf>,
        /// Piecewise-linear cdf JSON: {"knots": [[t, F], ...]}.
        #[arg(long)]
        cdf: Option<PathBuf>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of samples, with seeds seed, seed + 1, ...
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[command(flatten)]
        format: Format,
    },
    /// Homomorphism densities of K2, P3, K3, C4 and P4.
    Homdensity {
        /// Graph file, step graphon or boundary JSON.
        input: PathBuf,
        #[arg(long)]
        motif: Option<String>,
        #[arg(long, default_value_t = 16)]
        blocks: usize,
        #[command(flatten)]
        format: Format,
    },
    /// Decide whether a graph is a unit interval graph.
    Recognize {
        graph: PathBuf,
        #[arg(long, default_value = "exact", value_parser = parse_mode)]
        mode: Mode,
        #[command(flatten)]
        format: Format,
    },
    /// Coordinates on the line realizing a unit interval graph.
    EmbedGeometric {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        #[arg(long, default_value = "exact", value_parser = parse_mode)]
        mode: Mode,
        #[command(flatten)]
        format: Format,
    },
    /// Uniform linear embedding of a boundary graphon.
    EmbedUniform {
        boundary: PathBuf,
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[arg(long, default_value_t = 1e-6)]
        margin: f64,
        #[command(flatten)]
        format: Format,
    },
    /// Gamma* of w-random graphs across sizes and seeds, as CSV.
    Converge {
        /// JSON experiment config; flags below override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        source: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long)]
        seeds: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        orderings: Option<Vec<OrderingKind>>,
        #[arg(long)]
        mode: Option<ConvergeMode>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Record per-cell wall-clock time in `elapsed_ms`.
        #[arg(long)]
        timing: bool,
    },
}

/// Result of one invocation, ready to print.
#[derive(Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(stdout) => Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.code,
            stdout: match e.detail {
                Some(d) => to_json(&d).unwrap_or_default(),
                None => String::new(),
            },
            stderr: format!("error: {}\n", e.message),
        },
    }
}

/// Size of the worker pool: `LINEMBED_THREADS` when set to a positive
/// integer, otherwise rayon's default.
pub fn thread_count() -> Option<usize> {
    std::env::var("LINEMBED_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&k| k > 0)
}
