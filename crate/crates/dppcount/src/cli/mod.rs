//! Command-line front end.  Every run is described by a [`RunConfig`], validated before any
//! numerical work, and emitted as a CSV or JSON table headed by the canonical JSON of that
//! configuration, so that `dppcount replay <file>` reproduces the file exactly.
//!
//! Exit codes: `0` success, `2` invalid configuration (including unparsable flags), `3`
//! numerical failure, `1` I/O failure.  Tables are built completely before anything is written,
//! so a failing run leaves no partial output.

mod commands;
mod config;
mod table;

pub use commands::build_table;
pub use config::{CommandKind, EnsembleKind, Format, RunConfig, FINEST_TOL};
pub use table::{embedded_config, Table};

use crate::error::Error;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

/// Exit code for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit code for an I/O failure.
pub const EXIT_IO: i32 = 1;
/// Exit code for an invalid configuration.
pub const EXIT_CONFIG: i32 = 2;
/// Exit code for a numerical failure.
pub const EXIT_NUMERIC: i32 = 3;

/// Counting statistics of rotation-invariant determinantal point processes.
#[derive(Debug, Parser)]
#[command(name = "dppcount", version, about)]
pub struct Cli {
    /// Analysis to run.
    #[command(subcommand)]
    pub command: CliCommand,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Exact tail Pr{Ξ_R ≥ yΣ_R} against the deviation estimators (grid: y).
    Tail(RunArgs),
    /// Rate function I, I′, I″ (grid: y).
    Rate(RunArgs),
    /// Covariance kernels over all (s, t) pairs of the grid.
    Kernels(RunArgs),
    /// Entanglement entropy against r times the area-law coefficient (grid: r).
    Entropy(RunArgs),
    /// Normalized exact log-tails at xΘ_R against the rate integral (grid: R).
    Ldp(RunArgs),
    /// Exact disk-count variance against the Bessel closed form (grid: r).
    Variance(RunArgs),
    /// Raw Monte Carlo counts at one radius, or paths over an increasing grid of R.
    Sample(RunArgs),
    /// Re-runs the configuration embedded in an output file.
    Replay {
        /// CSV or JSON file written by a previous run.
        file: PathBuf,
        /// Output path (standard output if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Flags shared by all analysis commands.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Ensemble family.
    #[arg(long, value_enum, default_value_t = EnsembleKind::Ginibre)]
    pub ensemble: EnsembleKind,
    /// Landau level of the Ginibre families.
    #[arg(long, default_value_t = 0)]
    pub alpha: u32,
    /// Parameter of the hyperbolic ensemble.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Number of modes of the finite Ginibre ensemble.
    #[arg(long)]
    pub n_particles: Option<u64>,
    /// Euclidean disk radius r.
    #[arg(long, allow_hyphen_values = true)]
    pub radius: Option<f64>,
    /// Unfolded radius R.
    #[arg(long, allow_hyphen_values = true)]
    pub big_r: Option<f64>,
    /// Comma-separated grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub grid: Vec<f64>,
    /// Edge position a⁺ of a finite droplet.
    #[arg(long, allow_hyphen_values = true)]
    pub edge_aplus: Option<f64>,
    /// Requested accuracy.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Total-variation budget of truncation windows.
    #[arg(long, default_value_t = 1e-12)]
    pub eps_window: f64,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo sample size.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    /// Entropy parameter β.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Large-deviation exponent γ.
    #[arg(long, default_value_t = 1.5)]
    pub gamma: f64,
    /// Large-deviation level x.
    #[arg(long, default_value_t = 1.0)]
    pub x: f64,
    /// Output path (standard output if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

impl RunArgs {
    /// Configuration for `command`.
    pub fn to_config(&self, command: CommandKind) -> RunConfig {
        RunConfig {
            command,
            ensemble: self.ensemble,
            alpha: self.alpha,
            rho: self.rho,
            n_particles: self.n_particles,
            radius: self.radius,
            big_r: self.big_r,
            grid: self.grid.clone(),
            edge_aplus: self.edge_aplus,
            tol: self.tol,
            eps_window: self.eps_window,
            seed: self.seed,
            samples: self.samples,
            beta: self.beta,
            gamma: self.gamma,
            x: self.x,
            format: self.format,
        }
    }
}

/// Exit code for an error from the numerical layers or validation.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) => EXIT_CONFIG,
        _ => EXIT_NUMERIC,
    }
}

/// Builds the table for `config` and renders it.
///
/// # Errors
/// As for [`build_table`].
pub fn render(config: &RunConfig) -> crate::Result<String> {
    Ok(build_table(config)?.render(config))
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = err.print();
            return code;
        }
    };
    let (config, out) = match cli.command {
        CliCommand::Replay { file, out } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(err) => {
                    eprintln!("error: cannot read {}: {err}", file.display());
                    return EXIT_IO;
                }
            };
            match embedded_config(&text) {
                Some(config) => (config, out),
                None => {
                    eprintln!("error: {} carries no readable configuration", file.display());
                    return EXIT_CONFIG;
                }
            }
        }
        CliCommand::Tail(a) => (a.to_config(CommandKind::Tail), a.out),
        CliCommand::Rate(a) => (a.to_config(CommandKind::Rate), a.out),
        CliCommand::Kernels(a) => (a.to_config(CommandKind::Kernels), a.out),
        CliCommand::Entropy(a) => (a.to_config(CommandKind::Entropy), a.out),
        CliCommand::Ldp(a) => (a.to_config(CommandKind::Ldp), a.out),
        CliCommand::Variance(a) => (a.to_config(CommandKind::Variance), a.out),
        CliCommand::Sample(a) => (a.to_config(CommandKind::Sample), a.out),
    };
    match render(&config) {
        Ok(text) => match emit(&text, out.as_ref()) {
            Ok(()) => EXIT_OK,
            Err(err) => {
                eprintln!("error: cannot write output: {err}");
                EXIT_IO
            }
        },
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}
