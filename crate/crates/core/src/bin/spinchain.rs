use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use spinchain::app::{run, with_thread_cap};
use spinchain::config::{parse_config, Mode, RunConfig};

/// Correlators, quantum Fisher information and coherence of the XY chain
/// with Dzyaloshinsky-Moriya coupling.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a one-dimensional parameter sweep and write CSV.
    Sweep {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
    },
    /// Evaluate correlators and measures at a single point.
    Point {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
    },
    /// Check the thermodynamic formulas against finite-chain oracles.
    Verify {
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
    },
    /// Write the figure data sets as CSV files.
    Figures {
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
    },
}

const EXIT_FAILURES: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

fn load(mode: Mode, path: Option<PathBuf>) -> Result<RunConfig, String> {
    let text = match &path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => String::new(),
    };
    let label = path.as_ref().map_or("<defaults>".into(), |p| p.display().to_string());
    parse_config(&text, mode).map_err(|e| format!("{label}: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, path) = match cli.command {
        Command::Sweep { config } => (Mode::Sweep, Some(config)),
        Command::Point { config } => (Mode::Point, Some(config)),
        Command::Verify { config } => (Mode::Verify, config),
        Command::Figures { config } => (Mode::Figures, config),
    };
    let config = match load(mode, path) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    match with_thread_cap(|| run(&config)).and_then(|r| r) {
        Ok(summary) => {
            for msg in &summary.messages {
                eprintln!("{msg}");
            }
            if summary.success() {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: {} failure(s)", summary.failures);
                ExitCode::from(EXIT_FAILURES)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
