use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod output;

use config::FileConfig;

/// Exit codes: 0 success, 1 usage, 2 I/O, 3 capacity or tolerance failure.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Capacity(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Capacity(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Capacity(m) => m,
        }
    }
}

impl From<catmetro_core::Error> for CliError {
    fn from(e: catmetro_core::Error) -> Self {
        use catmetro_core::Error as E;
        match &e {
            E::Capacity(_) | E::Truncation { .. } => CliError::Capacity(e.to_string()),
            E::Grid { source, .. } if matches!(**source, E::Capacity(_) | E::Truncation { .. }) => {
                CliError::Capacity(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "catmetro", version, about = "Displacement-sensing bounds for coherent, squeezed and cat-state probes")]
struct Cli {
    /// Flat TOML key = value file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Entangled, separable and single-mode cat bounds against n_tot.
    Figure1(Figure1Args),
    /// One bound curve for any probe family.
    Bounds(BoundsArgs),
    /// Analytic entangled-cat Fisher information against the Fock oracle.
    QfiCheck(QfiCheckArgs),
    /// Product-state versus GHZ Ramsey phase estimation.
    Ramsey(RamseyArgs),
    /// Homodyne Monte Carlo estimate of a displacement.
    Montecarlo(MonteCarloArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long = "ntot-min")]
    pub ntot_min: Option<f64>,
    #[arg(long = "ntot-max")]
    pub ntot_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// linear or log
    #[arg(long)]
    pub spacing: Option<String>,
}

#[derive(Debug, Args)]
pub struct Figure1Args {
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// CSV output path, `-` for standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// coherent, squeezed, single_cat, separable_cats or entangled_cat
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QfiCheckArgs {
    /// Named (N, α) grid; only `default` is defined.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long = "N-list", value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    #[arg(long = "alpha-list", value_delimiter = ',')]
    pub alpha_list: Option<Vec<f64>>,
    #[arg(long = "pure-tol")]
    pub pure_tol: Option<f64>,
    #[arg(long = "fd-tol")]
    pub fd_tol: Option<f64>,
    #[arg(long = "fd-step")]
    pub fd_step: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RamseyArgs {
    #[arg(long = "N-list", value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    #[arg(long)]
    pub shots: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Independent runs per row used for the empirical spread.
    #[arg(long)]
    pub replications: Option<usize>,
    /// Phase; defaults to π/(4N) for each N.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    /// coherent or squeezed
    #[arg(long)]
    pub probe: Option<String>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub shots: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Coherent amplitude.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Squeeze parameter.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Figure1(args) => commands::figure1(&args, &file),
        Command::Bounds(args) => commands::bounds(&args, &file),
        Command::QfiCheck(args) => commands::qfi_check(&args, &file),
        Command::Ramsey(args) => commands::ramsey(&args, &file),
        Command::Montecarlo(args) => commands::montecarlo(&args, &file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("catmetro: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
