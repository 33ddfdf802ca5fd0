use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fano_cli::input::resolve_lattice;
use fano_cli::report::{self, json, Render};
use fano_cli::CliError;
use serde::Serialize;

/// Exact lattice computations for special Fano fourfolds of degree 10.
#[derive(Parser)]
#[command(name = "fano", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to FILE instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants and discriminant form of a lattice.
    LatticeInfo {
        /// Builtin name (U, A1, E8, Lambda, Lambda2, I22_2, I20_2), inline JSON, or a JSON file.
        gram: String,
        #[command(flatten)]
        out: Output,
    },
    /// Orbit representatives of special sublattices of discriminant d.
    Classify {
        d: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Associated K3 surface and cubic fourfold, by both methods.
    Assoc {
        d: u64,
        #[command(flatten)]
        out: Output,
    },
    /// One row per admissible d up to D_MAX.
    Sweep {
        d_max: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Discriminants of the example surface families.
    Examples {
        #[command(flatten)]
        out: Output,
    },
    /// Target lattices of the two rank-4 families for e up to E_MAX.
    Th81 {
        #[arg(allow_negative_numbers = true)]
        e_max: i64,
        #[command(flatten)]
        out: Output,
    },
}

fn emit<T: Serialize + Render>(value: T, out: &Output) -> Result<(), CliError> {
    let text = match out.format {
        Format::Text => value.text(),
        Format::Json => json(&value)?,
    };
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Domain(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::LatticeInfo { gram, out } => emit(report::lattice_info(&resolve_lattice(&gram)?)?, &out),
        Command::Classify { d, out } => emit(report::classify(d)?, &out),
        Command::Assoc { d, out } => emit(report::assoc(d)?, &out),
        Command::Sweep { d_max, out } => emit(report::sweep(d_max)?, &out),
        Command::Examples { out } => emit(report::examples()?, &out),
        Command::Th81 { e_max, out } => emit(report::th81(e_max)?, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fano: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
