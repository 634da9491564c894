use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use zeno_core::cli::{execute, parse_config, CliError};

/// Run one total-Zeno scenario described by a JSON config.
#[derive(Parser, Debug)]
#[command(name = "zeno", version)]
struct Args {
    /// Scenario config (JSON).
    #[arg(long)]
    config: PathBuf,

    /// Output file; overrides `output_path` in the config.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Suppress informational messages.
    #[arg(long)]
    quiet: bool,
}

fn run(args: &Args) -> Result<Option<PathBuf>, CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.config.display())))?;
    let cfg = parse_config(&text)?;
    execute(&cfg, args.output.as_deref())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(path) => {
            if let (false, Some(path)) = (args.quiet, path) {
                eprintln!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("zeno: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
