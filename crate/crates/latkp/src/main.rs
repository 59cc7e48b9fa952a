//! `latkp` — build exact lattice KP solutions and numerically certify the
//! equations, recurrences, Miura links, deformations, and linear systems
//! they satisfy.
//!
//! Exit codes: `0` every check passed, `1` at least one check failed or
//! errored, `2` configuration or usage problems.

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use latkp::{
    all_check_names, export_fields, parse_field, run_oracle, run_verify, ExportFormat,
    ReportDocument, RunConfig,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "latkp",
    version,
    about = "Exact lattice KP solutions with numerical certification of their equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured residual checks and write a JSON report.
    Verify {
        /// Path to the JSON run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Report destination; defaults to `outputs.report` from the
        /// configuration, then stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the configured tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Override the configured invariance seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate one field on the whole window and export it.
    Fields {
        /// Path to the JSON run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Field name, e.g. `U`, `TAU`, `S(0,0,1/3,1/7)`, `ZP(1/3,1/7)`.
        #[arg(long)]
        field: String,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compare the closed-form coefficient matrix against the vectorized
    /// linear-system solve at every window point.
    Oracle {
        /// Path to the JSON run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Report destination; defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List every runnable check name.
    ListChecks,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for ExportFormat {
    fn from(f: Format) -> ExportFormat {
        match f {
            Format::Csv => ExportFormat::Csv,
            Format::Json => ExportFormat::Json,
        }
    }
}

fn write_or_print(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// One human-readable line per check when the full report goes to a file.
fn print_check_lines(report: &ReportDocument) {
    for check in &report.checks {
        match &check.error {
            Some(message) => println!("{:<18} ERROR {message}", check.name),
            None => println!(
                "{:<18} {} max normalized residual {:.3e} (tolerance {:.1e})",
                check.name,
                if check.passed() { "pass" } else { "FAIL" },
                check.max_normalized,
                check.tolerance
            ),
        }
    }
}

fn emit_report(report: &ReportDocument, out: Option<&Path>) -> Result<ExitCode> {
    let text = report.to_json();
    write_or_print(&text, out)?;
    if out.is_some() {
        print_check_lines(report);
    }
    Ok(if report.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Verify {
            config,
            out,
            tolerance,
            seed,
        } => {
            let config = RunConfig::from_path(&config)?;
            let report = run_verify(&config, tolerance, seed)?;
            let out = out.or_else(|| config.outputs.report.clone().map(PathBuf::from));
            emit_report(&report, out.as_deref())
        }
        Command::Fields {
            config,
            field,
            out,
            format,
        } => {
            let config = RunConfig::from_path(&config)?;
            let field = parse_field(&field)?;
            let text = export_fields(&config, &field, format.into())?;
            write_or_print(&text, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { config, out } => {
            let config = RunConfig::from_path(&config)?;
            let report = run_oracle(&config)?;
            emit_report(&report, out.as_deref())
        }
        Command::ListChecks => {
            for name in all_check_names() {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
