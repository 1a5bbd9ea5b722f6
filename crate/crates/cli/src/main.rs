use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use hardy_cli::commands::{self, Failure, Outcome, EXIT_USAGE};
use hardy_cli::config::RunConfig;

#[derive(Parser)]
#[command(
    name = "hardy",
    version,
    about = "Bounds on the optimal constant of weighted Hardy inequalities"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Basic and improved bounds with the certified bracket.
    Bounds {
        #[arg(long)]
        config: PathBuf,
        /// Also write the table as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// The sequences delta_n and deltabar_n.
    Iterate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Brute-force lower bound from the Rayleigh quotient.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// CSV data for figure 1..7.
    Figure {
        #[arg(long)]
        id: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the extremal instance built from v and B1.
    Sharp {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        nodes: Option<usize>,
    },
}

fn load(path: &Path) -> Result<RunConfig, Failure> {
    RunConfig::load(path)
        .with_context(|| format!("reading config {}", path.display()))
        .map_err(|e| Failure {
            code: EXIT_USAGE,
            message: format!("{e:#}"),
        })
}

fn run(verb: Verb, out: &mut dyn Write) -> Outcome {
    match verb {
        Verb::Bounds {
            config,
            out: csv,
            nodes,
        } => commands::bounds(&load(&config)?, nodes, csv.as_deref(), out),
        Verb::Iterate { config, n, nodes } => commands::iterate(&load(&config)?, n, nodes, out),
        Verb::Oracle { config, nodes } => commands::oracle(&load(&config)?, nodes, out),
        Verb::Figure { id, out: path } => commands::figure_csv(id, path.as_deref(), out),
        Verb::Sharp { config, nodes } => commands::sharp(&load(&config)?, nodes, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli.verb, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = lock.flush();
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
