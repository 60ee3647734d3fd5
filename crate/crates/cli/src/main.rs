//! `qgame`: batch runner for games, replicator flows and quantum protocols.
//!
//! Every scientific parameter lives in the JSON input; flags only choose
//! files, output format, seed and thread count.

mod commands;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "qgame", version, about = "Game-theory and quantum-game batch runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON input document
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Output file; stdout when omitted
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format; defaults to csv for a `.csv` output path, json otherwise
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for grid scans and sample batches
    #[arg(long, global = true, env = "QGAME_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum Command {
    /// Equilibria, Pareto optima, minimax and ESS checks for a bimatrix game
    GameAnalyze,
    /// Integrate the replicator equation
    Replicator,
    /// Compare the Lax-form flow with the replicator field on random samples
    LaxCheck,
    /// Integrate the von Neumann equation
    QuantumEvolve,
    /// Play the penny-flip game
    Pennyflip,
    /// Equilibrium scan and invasion analysis of the entangled prisoner's dilemma
    Ewl,
    /// Equilibrium scan of the tactic-mixing (MW) scheme
    Mw,
    /// Entropies of states, flows and distributions
    Entropy,
    /// Gibbs ensemble, entropy identities and beta sweeps
    Gibbs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads.filter(|&n| n > 0) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))?;
    }
    let format = cli.format.unwrap_or_else(|| match cli.output.as_deref().and_then(|p| p.extension()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
        _ => Format::Json,
    });
    let content = commands::dispatch(cli.command, cli.input.as_deref(), format, cli.seed)?;
    io::emit(cli.output.as_deref(), &content)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qgame: {e}");
            e.exit_code()
        }
    }
}
