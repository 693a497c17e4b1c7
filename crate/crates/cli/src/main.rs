//! Command-line front end: parameter parsing, experiment orchestration,
//! and CSV/JSON emission for every table the library produces.
//!
//! Exit codes: 0 on success, 1 on invalid input (single-line diagnostic on
//! stderr), 2 when a check subcommand ran but exceeded its tolerance.

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use table::OutputFormat;

#[derive(Parser)]
#[command(
    name = "repqec",
    version,
    about = "Logical error channels of the repetition code under coherent and stochastic bit-flip noise"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RecursionMode {
    /// Leading-order recursion of the per-level parameters
    Leading,
    /// Iterated exact one-level map (at most 4 levels)
    Exact,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; stdout when absent
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Command {
    /// Per-level table of effective parameters and coherence metrics
    Recurse {
        /// Code distance (odd)
        #[arg(long, conflicts_with = "d_list")]
        d: Option<u32>,
        /// Comma-separated list of code distances
        #[arg(long, value_delimiter = ',')]
        d_list: Vec<u32>,
        /// Physical rotation angle per cycle, radians
        #[arg(long)]
        epsilon: f64,
        /// Physical flip probability per cycle
        #[arg(long)]
        q: f64,
        /// Number of concatenation levels
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        #[arg(long, value_enum, default_value = "leading")]
        mode: RecursionMode,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Channel metrics and failure predictions for one parameter point
    Metrics {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        q: f64,
        /// Worst-case infidelity defining logical failure
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte Carlo failure curve of the exact logical channel with
    /// analytic overlay columns
    Simulate {
        /// Code distance (odd)
        #[arg(long)]
        d: u32,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        q: f64,
        /// Number of trajectories
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Number of QEC cycles per trajectory
        #[arg(long, default_value_t = 2000)]
        m_max: usize,
        /// RNG seed; the SEED environment variable is honored when absent
        #[arg(long)]
        seed: Option<u64>,
        /// Initial-state parameter (0 is logical |0>)
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        /// Worker threads; results are identical for any count
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare the closed-form logical block against brute-force
    /// tomography over a parameter grid (exit 2 beyond tolerance)
    OracleCheck {
        /// Register size (odd, at most 7)
        #[arg(long)]
        n: usize,
        /// Grid points per axis over epsilon in [0, 0.3], q in [0, 0.1]
        #[arg(long, default_value_t = 5)]
        grid: usize,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Verify correctability of two-qubit XX-interaction noise under the
    /// tailored decoder (exit 2 on failure)
    ZzCheck {
        /// Largest register for the syndrome-bijection check (odd, at most 15)
        #[arg(long, default_value_t = 15)]
        n_max: usize,
        /// Random coupling sets per register size for the fidelity check
        #[arg(long, default_value_t = 20)]
        sets: usize,
        /// RNG seed; the SEED environment variable is honored when absent
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Grid of exact one-level logical parameters
    Sweep {
        /// Code distance (odd)
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 0.0)]
        epsilon_min: f64,
        #[arg(long, default_value_t = 0.3)]
        epsilon_max: f64,
        #[arg(long, default_value_t = 5)]
        epsilon_steps: usize,
        #[arg(long, default_value_t = 0.0)]
        q_min: f64,
        #[arg(long, default_value_t = 0.1)]
        q_max: f64,
        #[arg(long, default_value_t = 5)]
        q_steps: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                let _ = err.print();
                return ExitCode::SUCCESS;
            }
            let rendered = err.to_string();
            eprintln!(
                "{}",
                rendered
                    .lines()
                    .next()
                    .unwrap_or("error: invalid arguments")
            );
            return ExitCode::from(1);
        }
    };
    match commands::run(cli.command) {
        Ok(commands::Outcome::Success) => ExitCode::SUCCESS,
        Ok(commands::Outcome::CheckFailed(message)) => {
            eprintln!("{message}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
