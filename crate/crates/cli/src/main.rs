//! `bgsol`: command-line runner for the Bulgarian solitaire experiments.
//!
//! Every output starts with the resolved run spec, so a file alone is enough
//! to repeat the run. Exit codes: 0 success, 2 invalid input, 3 a size guard
//! or move budget was hit.

mod args;
mod commands;
mod output;

use std::fmt;
use std::fs::File;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::Value;

use args::{merge_config, resolve_seed, Cli, Command};

#[derive(Debug)]
pub enum CliError {
    Clap(clap::Error),
    Usage(String),
    /// A size guard or move budget of the library tripped.
    Guard(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Clap(e) => e.exit_code() as u8,
            CliError::Usage(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Clap(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Guard(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl From<bgsol_core::Error> for CliError {
    fn from(e: bgsol_core::Error) -> Self {
        if e.is_runtime_guard() {
            CliError::Guard(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

fn spec_of<T: serde::Serialize>(args: &T, seed: u64) -> Value {
    let mut v = serde_json::to_value(args).unwrap_or(Value::Null);
    if let Value::Object(m) = &mut v {
        m.insert("seed".into(), seed.into());
    }
    v
}

fn run(argv: Vec<String>) -> Result<(), CliError> {
    let argv = merge_config(argv)?;
    let cli = Cli::try_parse_from(&argv).map_err(CliError::Clap)?;
    if let Some(t) = cli.common.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let seed = resolve_seed(cli.common.seed)?;
    let format = cli
        .common
        .format
        .unwrap_or_else(|| cli.command.default_format());
    // open the output first so a bad path fails before any computation
    let mut sink: Box<dyn Write> = match &cli.common.out {
        Some(path) => Box::new(
            File::create(path)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        ),
        None => Box::new(std::io::stdout().lock()),
    };

    let (spec, report) = match &cli.command {
        Command::DetRun(a) => (spec_of(a, seed), commands::det_run(a, seed)?),
        Command::Cycle(a) => (spec_of(a, seed), commands::cycle(a)?),
        Command::Hit(a) => (spec_of(a, seed), commands::hit(a, seed)?),
        Command::Energy(a) => (spec_of(a, seed), commands::energy(a)?),
        Command::Estimate(a) => (spec_of(a, seed), commands::estimate(a, seed)?),
        Command::Exact(a) => (spec_of(a, seed), commands::exact(a)?),
        Command::Sweep(a) => (spec_of(a, seed), commands::sweep(a, seed)?),
        Command::Dominate(a) => (spec_of(a, seed), commands::dominate(a, seed)?),
        Command::Deviation(a) => (spec_of(a, seed), commands::deviation(a, seed)?),
    };
    let bytes = output::render(cli.command.name(), &spec, &report, format)?;
    sink.write_all(&bytes)
        .and_then(|()| sink.flush())
        .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args_os()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match run(argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Clap(e)) => {
            let code = e.exit_code() as u8;
            let _ = e.print();
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("bgsol: {e}");
            ExitCode::from(e.code())
        }
    }
}
