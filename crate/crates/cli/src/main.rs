//! Config-driven experiment runner for the loglaw laboratory.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use loglaw_cli::catalogue::catalogue_text;
use loglaw_cli::run::{run_config_file, validate_config_file, Overrides};

#[derive(Parser)]
#[command(
    name = "loglaw",
    about = "Simulate measure-preserving maps and flows, measure hitting times \
             to shrinking targets, and estimate the scaling exponents that the \
             hitting-time laws predict.",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiments in a config file.
    Run {
        /// Path to the TOML experiment config.
        #[arg(long)]
        config: PathBuf,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (also LOGLAW_WORKERS; results never depend on it).
        #[arg(long)]
        workers: Option<usize>,
        /// Override the output directory.
        #[arg(long)]
        out: Option<String>,
        /// Run only the named experiment from a multi-experiment config.
        #[arg(long)]
        experiment: Option<String>,
    },
    /// Print the catalogue of systems, targets, experiments, observables.
    List,
    /// Parse and resolve a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            seed,
            workers,
            out,
            experiment,
        } => {
            let overrides = Overrides {
                seed,
                workers,
                out_dir: out,
                experiment,
            };
            match run_config_file(&config, &overrides) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
        Command::List => {
            print!("{}", catalogue_text());
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match validate_config_file(&config) {
            Ok(report) => {
                println!("{report}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
