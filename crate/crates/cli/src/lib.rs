//! Command-line harness: parses flags or a TOML config, runs one experiment
//! command and renders its report.
//!
//! Exit codes: 0 success, 1 usage or runtime error, 2 when a verification
//! check in the report came back false.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::config::{limits_from_env, Command, ExperimentConfig, Fault, Format, Grid, PlayerRange};
use crate::report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] mermin_core::Error),
    #[error("i/o: {0}")]
    Io(String),
}

#[derive(Debug, Parser)]
#[command(name = "game", version, about = "Mermin parity game workbench")]
struct Cli {
    /// TOML file holding an experiment config; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Exact classical bound for n players.
    Bound(Flags),
    /// Exhaustive search over deterministic classical strategies.
    Search(Flags),
    /// Play the entangled strategy on every (or sampled) question.
    Quantum(Flags),
    /// Bit-flip noise thresholds and comparison grid.
    Noise(Flags),
    /// Detector inefficiency thresholds, error-free sweep and grid.
    Detect(Flags),
    /// One document covering every reproduced number.
    Report(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// Player count: 5, 3..9 (inclusive), 3..=9 or 3,5,7.
    #[arg(long)]
    n: Option<PlayerRange>,
    /// Bit-flip grid start:stop:step (inclusive) or a single value.
    #[arg(long)]
    p: Option<Grid>,
    /// Detection efficiency grid start:stop:step or a single value.
    #[arg(long)]
    eta: Option<Grid>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// CSV file for the optimal strategies found by `search`.
    #[arg(long, value_name = "FILE")]
    witnesses: Option<PathBuf>,
    /// Cross-check the analytic path against the state-vector simulation.
    #[arg(long)]
    dense_check: bool,
    /// Append wall-clock time (makes output run-dependent).
    #[arg(long)]
    timing: bool,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<Fault>,
}

impl Cmd {
    fn split(self) -> (Command, Flags) {
        match self {
            Cmd::Bound(f) => (Command::Bound, f),
            Cmd::Search(f) => (Command::Search, f),
            Cmd::Quantum(f) => (Command::Quantum, f),
            Cmd::Noise(f) => (Command::Noise, f),
            Cmd::Detect(f) => (Command::Detect, f),
            Cmd::Report(f) => (Command::Report, f),
        }
    }
}

fn merge(cli: Cli) -> Result<ExperimentConfig, HarnessError> {
    let base = cli.config.as_deref().map(ExperimentConfig::load).transpose()?;
    let Some(cmd) = cli.command else {
        return base.ok_or_else(|| HarnessError::Usage("no command given (try --help)".into()));
    };
    let (command, f) = cmd.split();
    let mut c = base.unwrap_or_else(|| ExperimentConfig::new(command));
    c.command = command;
    if f.n.is_some() {
        c.n = f.n;
    }
    if f.p.is_some() {
        c.p = f.p;
    }
    if f.eta.is_some() {
        c.eta = f.eta;
    }
    if f.trials.is_some() {
        c.trials = f.trials;
    }
    if let Some(seed) = f.seed {
        c.seed = seed;
    }
    if f.format.is_some() {
        c.format = f.format;
    }
    if f.out.is_some() {
        c.out = f.out;
    }
    if f.witnesses.is_some() {
        c.witnesses = f.witnesses;
    }
    c.dense_check |= f.dense_check;
    c.timing |= f.timing;
    if f.inject_fault.is_some() {
        c.inject_fault = f.inject_fault;
    }
    Ok(c)
}

/// Parses `args` (program name first) into a config.
pub fn parse_config<I, T>(args: I) -> Result<ExperimentConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    merge(cli).map_err(|e| clap::Error::raw(clap::error::ErrorKind::ValueValidation, format!("{e}\n")))
}

/// Runs a config and renders the report.
pub fn execute(config: &ExperimentConfig) -> Result<(Report, String), HarnessError> {
    let limits = limits_from_env()?;
    let start = Instant::now();
    let mut report = commands::run(config, limits)?;
    if config.timing {
        report.timing = Some(report::Timing {
            elapsed_ms: start.elapsed().as_millis() as u64,
        });
    }
    let text = report.render(config.resolved_format())?;
    Ok((report, text))
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_config(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (report, text) = match execute(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &config.out {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    if report.verified {
        EXIT_OK
    } else {
        for c in report.checks.iter().filter(|c| !c.passed) {
            eprintln!("verification failed: {}: {}", c.name, c.detail);
        }
        EXIT_VERIFICATION
    }
}
