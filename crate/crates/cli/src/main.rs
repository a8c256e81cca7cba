use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spinbc_cli::{exit, run_experiment, validate_config, ConfigError, Overrides, RunError};

#[derive(Parser)]
#[command(
    name = "spinbc",
    version,
    about = "Run spin-system boundary experiments from TOML configs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write CSV data plus a JSON summary.
    Run {
        config: PathBuf,
        /// Worker threads (results do not depend on this).
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory; overrides `output_dir`.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Overrides `master_seed`.
        #[arg(long)]
        master_seed: Option<u64>,
    },
    /// Check a config file and print every problem found.
    Validate { config: PathBuf },
}

fn report_config(path: &std::path::Path, e: &ConfigError) {
    match e {
        ConfigError::Io { .. } => eprintln!("error: {e}"),
        ConfigError::Invalid(d) => {
            for x in d {
                eprintln!("{}: {x}", path.display());
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { config } => match validate_config(&config) {
            Ok(c) => {
                println!("{}: ok ({})", config.display(), c.experiment().name());
                ExitCode::SUCCESS
            }
            Err(e) => {
                report_config(&config, &e);
                ExitCode::from(exit::INVALID_CONFIG)
            }
        },
        Command::Run {
            config,
            workers,
            output,
            master_seed,
        } => {
            let loaded = match validate_config(&config) {
                Ok(c) => c,
                Err(e) => {
                    report_config(&config, &e);
                    return ExitCode::from(exit::INVALID_CONFIG);
                }
            };
            let overrides = Overrides {
                workers,
                output,
                master_seed,
            };
            match run_experiment(loaded, &overrides) {
                Ok(r) => {
                    for f in &r.files {
                        println!("{}", f.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    match &e {
                        RunError::Config(c) => report_config(&config, c),
                        _ => eprintln!("error: {e:#}"),
                    }
                    ExitCode::from(e.exit_code())
                }
            }
        }
    }
}
