//! `cirsensor`: transmission sweeps, precision curves and maps, Monte Carlo
//! estimation runs, and operating-point optimization for a Feshbach-tuned
//! waveguide magnetometer. Outputs are CSV/JSON plus a manifest per command.

mod commands;
mod config;
mod manifest;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;

/// Exit code 2: configuration or usage problems. Exit code 1: numeric or I/O
/// failures at run time.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 1,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "cirsensor",
    version,
    about = "Waveguide collisional magnetometer: transmission, precision bounds, estimation"
)]
struct Cli {
    /// JSON run configuration (a manifest from an earlier run also works)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override the RNG seed from the configuration
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (overrides output.dir from the configuration)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel sections (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transmission T(B) over a field range (plus momentum-averaged T when
    /// the budget carries a momentum spread)
    Transmission {
        #[arg(long)]
        b_min: f64,
        #[arg(long)]
        b_max: f64,
        #[arg(long)]
        points: usize,
    },
    /// Fisher information and single-shot precision over a field range
    Precision {
        #[arg(long)]
        b_min: f64,
        #[arg(long)]
        b_max: f64,
        #[arg(long)]
        points: usize,
    },
    /// Single-shot precision map over (B, p) with located features
    Map {
        #[arg(long)]
        b_min: f64,
        #[arg(long)]
        b_max: f64,
        #[arg(long, default_value_t = 256)]
        nb: usize,
        #[arg(long)]
        p_min: f64,
        #[arg(long)]
        p_max: f64,
        #[arg(long, default_value_t = 128)]
        np: usize,
    },
    /// Monte Carlo counting runs with maximum-likelihood field estimation
    Estimate {
        #[arg(long)]
        b_true: f64,
        #[arg(long)]
        m_sent: u64,
        #[arg(long)]
        n_trials: u64,
        /// Prior interval on which the transmission must be monotone
        #[arg(long)]
        prior_min: f64,
        #[arg(long)]
        prior_max: f64,
    },
    /// Minimize single-shot precision over (B, p) windows
    Optimize {
        #[arg(long)]
        b_min: f64,
        #[arg(long)]
        b_max: f64,
        #[arg(long)]
        p_min: f64,
        #[arg(long)]
        p_max: f64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Config("threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let config_path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("--config PATH is required".into()))?;
    let run = RunConfig::load(config_path)?.into_run(cli.seed)?;
    let out_dir = output::ensure_out_dir(&run.config.output.dir, cli.out.as_deref())?;

    match cli.command {
        Command::Transmission {
            b_min,
            b_max,
            points,
        } => commands::transmission(&run, &out_dir, b_min, b_max, points),
        Command::Precision {
            b_min,
            b_max,
            points,
        } => commands::precision(&run, &out_dir, b_min, b_max, points),
        Command::Map {
            b_min,
            b_max,
            nb,
            p_min,
            p_max,
            np,
        } => commands::map(&run, &out_dir, b_min, b_max, nb, p_min, p_max, np),
        Command::Estimate {
            b_true,
            m_sent,
            n_trials,
            prior_min,
            prior_max,
        } => commands::estimate(&run, &out_dir, b_true, m_sent, n_trials, prior_min, prior_max),
        Command::Optimize {
            b_min,
            b_max,
            p_min,
            p_max,
        } => commands::optimize(&run, &out_dir, b_min, b_max, p_min, p_max),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
