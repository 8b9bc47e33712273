//! `chartheta` command-line front end.

mod commands;
mod config;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use commands::Command;
use config::{load_config, Format, Overrides, RunConfig};
use error::CliError;
use report::ReportEnvelope;

#[derive(Debug, Parser)]
#[command(name = "chartheta", version, about = "Dirichlet characters, theta functions and L-value moments")]
struct Cli {
    /// `key=value` file with tol, workers, output_dir, format, seed
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Target absolute tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true, env = "CHARTHETA_WORKERS")]
    workers: Option<usize>,
    /// Write `<command>.<format>` here instead of stdout
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

fn run(cli: Cli, argv: Vec<String>) -> Result<(), CliError> {
    let base = match &cli.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    let config = base.overlay(&Overrides {
        tol: cli.tol,
        workers: cli.workers,
        output_dir: cli.output_dir.clone(),
        format: cli.format,
        seed: cli.seed,
    });
    config.validate()?;
    // fails only if a pool already exists, which cannot happen here
    let _ = rayon::ThreadPoolBuilder::new().num_threads(config.workers).build_global();

    let payload = cli.command.run(&config)?;
    let envelope = ReportEnvelope {
        tool: "chartheta".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command_line: argv,
        command: cli.command.name().into(),
        args: cli.command.args_json()?,
        config: config.clone(),
        timestamp: report::timestamp(),
        payload,
    };
    let (text, ext) = match config.format {
        Format::Csv => (envelope.to_csv()?, "csv"),
        Format::Json => (envelope.to_json()?, "json"),
    };
    match &config.output_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(format!("{}.{ext}", envelope.command));
            std::fs::write(&path, text)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        // help and version exit 0, usage errors exit 2
        Err(e) => e.exit(),
    };
    match run(cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
