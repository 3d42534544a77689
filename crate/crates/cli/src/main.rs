use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use tq_cli::{exit_code, load_scenario, run, CliError, Command, Config};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "tq", version, about = "Contexts, daseinisation and sieve-valued truth for finite quantum systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario file (JSON)
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,

    /// Config file (JSON) with tolerances and leaf budget
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Set every tolerance to this value (overrides the config file)
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Leaf budget for the section search (overrides the config file)
    #[arg(long, global = true)]
    leaf_budget: Option<u64>,
}

fn execute(cli: &Cli) -> Result<u8, CliError> {
    let path = cli.scenario.as_deref().ok_or_else(|| CliError::Validation("--scenario <path> is required".into()))?;
    let config = Config::resolve(cli.config.as_deref(), cli.tol, cli.leaf_budget)?;
    let scenario = load_scenario(path, &config.tolerances)?;
    let report = run(&cli.command, &scenario, &config)?;
    // Text reports already carry the warnings.
    if matches!(cli.format, Format::Json) || cli.out.is_some() {
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
    }
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &cli.out {
        Some(out) => fs::write(out, text)
            .map_err(|e| CliError::Io { path: out.display().to_string(), message: e.to_string() })?,
        None => print!("{text}"),
    }
    Ok(exit_code(&report))
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
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
