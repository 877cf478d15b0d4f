//! `bicotwist`: run verification suites on an instance file or a built-in
//! fixture and print a report.
//!
//! Exit status is 0 when every check passes, 1 when some check fails and 2
//! when the instance cannot be read, parsed, validated or constructed.

use std::path::PathBuf;
use std::process::ExitCode;

use bicotwist::{Command, Options};
use clap::{Parser, ValueEnum};

const SEED_VAR: &str = "BICOTWIST_SEED";

#[derive(Parser, Debug)]
#[command(name = "bicotwist", version, about = "Exact verification of bicovariant bimodules, braidings, metrics and cocycle twists")]
struct Cli {
    /// verify | braiding | metrics | twist | all
    command: String,
    /// Path to an instance file, or a built-in fixture name such as FIX-Z4
    source: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run independent suites on a thread pool
    #[arg(long)]
    parallel: bool,
    /// Record per-check wall time (makes output run-dependent)
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn seed_from_env() -> Result<Option<u64>, String> {
    match std::env::var(SEED_VAR) {
        Ok(s) if s.trim().is_empty() => Ok(None),
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("{SEED_VAR}: expected an unsigned 64-bit integer, got {s:?}")),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(format!("{SEED_VAR}: {e}")),
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cmd: Command = match cli.command.parse() {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let seed = match seed_from_env() {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let inst = match bicotwist::load(&cli.source).and_then(|s| s.build()) {
        Ok(i) => i,
        Err(e) => return fail(e),
    };
    let opts = Options {
        parallel: cli.parallel,
        timings: cli.timings,
        seed,
    };
    let report = bicotwist::run(cmd, &inst, opts);
    let body = match cli.format {
        Format::Text => report.to_text(),
        Format::Json => serde_json::to_string_pretty(&report.to_json()).expect("report serializes") + "\n",
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                return fail(format!("{}: {e}", path.display()));
            }
        }
        None => print!("{body}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        if let Some(c) = report.first_failure() {
            eprintln!("failed: {} [{}]", c.id, c.witness.as_deref().unwrap_or(""));
        }
        ExitCode::from(1)
    }
}
