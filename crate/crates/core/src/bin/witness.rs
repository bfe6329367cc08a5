use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use modewit::report::{run_document, RunOptions};
use modewit::witness::{BatteryConfig, CriterionSet, DEFAULT_MAX_DEGREE, DEFAULT_TOLERANCE};

#[derive(Parser)]
#[command(name = "witness", version, about = "Entanglement criteria for multi-mode bosonic states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run the criterion battery on a state document.
    ///
    /// Exit status: 0 nothing fired, 2 some criterion fired, 1 error.
    Run {
        /// JSON state document.
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: u32,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        /// Comma-separated criterion names, or `all`.
        #[arg(long, default_value = "all")]
        criteria: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Seed for random constructors without their own.
        #[arg(long)]
        seed: Option<u64>,
        /// Cross-check cuts of pure states against their Schmidt rank.
        #[arg(long)]
        oracle: bool,
    },
}

fn main() -> ExitCode {
    let Command::Run {
        state,
        max_degree,
        tolerance,
        criteria,
        format,
        seed,
        oracle,
    } = Cli::parse().command;

    let run = || -> modewit::Result<(String, bool)> {
        let text = std::fs::read_to_string(&state)
            .map_err(|e| modewit::Error::Io(format!("{}: {e}", state.display())))?;
        let opts = RunOptions {
            battery: BatteryConfig {
                max_degree,
                tolerance,
                criteria: CriterionSet::parse(&criteria)?,
                parallel: true,
            },
            seed,
            oracle,
        };
        let (doc, fired) = run_document(&text, &opts)?;
        let out = match format {
            Format::Json => doc.to_json(),
            Format::Text => doc.to_text(),
        };
        Ok((out, fired))
    };

    match run() {
        Ok((out, fired)) => {
            println!("{}", out.trim_end());
            if fired {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("witness: {e}");
            ExitCode::from(1)
        }
    }
}
