use std::path::PathBuf;
use std::process::ExitCode;

use capclass::report::ReportOptions;
use capclass_cli::commands::{self, CliError, EXIT_USAGE};
use clap::{Parser, Subcommand};

/// Caps in AG(n,2): templates, checks, equivalence and classification.
#[derive(Parser)]
#[command(name = "capclass", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a standard dimension-7 template as a cap file.
    Template { label: String },
    /// Report cap status, dimension, size, completeness and type census.
    Check { file: PathBuf },
    /// Test two caps for affine equivalence and print a witness map.
    Equiv { a: PathBuf, b: PathBuf },
    /// Print the first quad closure of a point set as a cap file.
    Closure { file: PathBuf },
    /// Print the canonical form of a cap.
    Form { file: PathBuf },
    /// Classify full-dimensional caps of Z_2^dim up to max_size points.
    Classify {
        dim: usize,
        max_size: usize,
        /// Write one cap file per representative into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every claim of the dimension-7 classification.
    VerifyPaper {
        #[arg(long)]
        json: bool,
        /// Template table (JSON) to use instead of the built-in one.
        #[arg(long)]
        templates: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        exchange_trials: usize,
        #[arg(long, default_value_t = 1000)]
        invariance_maps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("CAPCLASS_THREADS") else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("CAPCLASS_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<commands::Output, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Template { label } => commands::template(&label),
        Command::Check { file } => commands::check(&file),
        Command::Equiv { a, b } => commands::equiv(&a, &b),
        Command::Closure { file } => commands::closure(&file),
        Command::Form { file } => commands::form(&file),
        Command::Classify { dim, max_size, out } => commands::classify_cmd(dim, max_size, out.as_deref()),
        Command::VerifyPaper { json, templates, exchange_trials, invariance_maps, seed } => {
            let opts = ReportOptions { exchange_trials, invariance_maps, seed };
            commands::verify_paper(json, templates.as_deref(), &opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("capclass: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
