use std::path::{Path, PathBuf};

use bgsol_core::Partition;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "bgsol",
    version,
    about = "Deterministic and random Bulgarian solitaire experiments"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Master seed; falls back to BGSOL_SEED, then 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Plain `key=value` file of flag values. Flags on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for parallel runs; all cores by default.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Plays the game from a start and lists every state.
    DetRun(DetRun),
    /// Transient length and cycle of the deterministic orbit.
    Cycle(CycleArgs),
    /// When the deterministic orbit enters the rough triangle.
    Hit(Hit),
    /// Shape and energy trace of the deterministic orbit.
    Energy(Energy),
    /// Monte Carlo estimate of a stationary mass.
    Estimate(Estimate),
    /// Exact stationary law of a small deck.
    Exact(Exact),
    /// Estimates over a grid of deck sizes, probabilities and radii.
    Sweep(Sweep),
    /// Domination of the rescaled random game by the immigration process.
    Dominate(Dominate),
    /// Distance to the triangular profile under the stationary law.
    Deviation(Deviation),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::DetRun(_) => "det-run",
            Command::Cycle(_) => "cycle",
            Command::Hit(_) => "hit",
            Command::Energy(_) => "energy",
            Command::Estimate(_) => "estimate",
            Command::Exact(_) => "exact",
            Command::Sweep(_) => "sweep",
            Command::Dominate(_) => "dominate",
            Command::Deviation(_) => "deviation",
        }
    }

    pub fn default_format(&self) -> Format {
        match self {
            Command::DetRun(_) | Command::Energy(_) | Command::Exact(_) | Command::Sweep(_) => {
                Format::Csv
            }
            _ => Format::Json,
        }
    }
}

fn partition(s: &str) -> Result<Partition, String> {
    s.parse().map_err(|e: bgsol_core::Error| e.to_string())
}

#[derive(Args, Debug, Serialize)]
pub struct DetRun {
    #[arg(long, value_parser = partition)]
    pub start: Partition,
    #[arg(long)]
    pub moves: u64,
    /// Removal probability; 1 plays the deterministic game.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Writes the final Etienne diagram as a text grid.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    /// Writes the final Etienne diagram as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct CycleArgs {
    #[arg(long, value_parser = partition)]
    pub start: Partition,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_moves: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct Hit {
    #[arg(long, value_parser = partition, required_unless_present = "n", conflicts_with = "n")]
    pub start: Option<Partition>,
    /// Draws a random start of this many cards from G(gamma1, gamma2).
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, default_value_t = 2.0)]
    pub gamma1: f64,
    #[arg(long, default_value_t = 2.0)]
    pub gamma2: f64,
    /// Rejects a given start outside G(gamma1, gamma2).
    #[arg(long)]
    pub require_reasonable: bool,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    /// Defaults to ceil(100 sqrt N).
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
pub struct Energy {
    #[arg(long, value_parser = partition)]
    pub start: Partition,
    /// Defaults to ceil(100 sqrt N).
    #[arg(long)]
    pub moves: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub stride: u64,
    /// Reports block-wise decay over this many stages instead of a trace.
    #[arg(long)]
    pub decay_stages: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub block_constant: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredicateKind {
    RoughTriangle,
    G,
    V,
    VHat,
    Equals,
    Always,
}

/// Chain parameters shared by the Monte Carlo commands. Unset values take the
/// library defaults for each deck size.
#[derive(Args, Debug, Clone, Serialize)]
pub struct ChainArgs {
    #[arg(long, default_value_t = 8)]
    pub chains: u64,
    /// Moves per chain, burn-in included.
    #[arg(long)]
    pub moves: Option<u64>,
    #[arg(long)]
    pub burn_in: Option<u64>,
    #[arg(long)]
    pub stride: Option<u64>,
    /// `t0`, `single-pile`, `worst-case` or a partition such as `5,3,2`.
    #[arg(long, default_value = "t0")]
    pub start: String,
}

#[derive(Args, Debug, Serialize)]
pub struct Estimate {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = PredicateKind::RoughTriangle)]
    pub predicate: PredicateKind,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    /// Defaults to 5/p.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Defaults to 5/p + 3/2.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Target of the `equals` predicate.
    #[arg(long, value_parser = partition)]
    pub state: Option<Partition>,
    #[command(flatten)]
    pub chain: ChainArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct Exact {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub p: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct Sweep {
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.25")]
    pub eps: Vec<f64>,
    #[command(flatten)]
    pub chain: ChainArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct Dominate {
    #[arg(long, required_unless_present = "start")]
    pub n: Option<u64>,
    /// Defaults to the near-triangular configuration of N cards.
    #[arg(long, value_parser = partition)]
    pub start: Option<Partition>,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta0: f64,
    /// Defaults to ceil(sqrt N).
    #[arg(long)]
    pub horizon: Option<u64>,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct Deviation {
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[command(flatten)]
    pub chain: ChainArgs,
}

fn config_path(argv: &[String]) -> Option<String> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

fn parse_config(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("{}:{}: expected key=value", path.display(), i + 1))
        })?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key == "config" {
            return Err(CliError::Usage(format!(
                "{}:{}: config files do not nest",
                path.display(),
                i + 1
            )));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Appends the config file values whose flags are absent from `argv`.
pub fn merge_config(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let entries = parse_config(Path::new(&path))?;
    let cmd = Cli::command();
    let sub = argv.iter().skip(1).find_map(|a| cmd.find_subcommand(a));
    let takes_value = |key: &str| -> Option<bool> {
        cmd.get_arguments()
            .chain(sub.into_iter().flat_map(|s| s.get_arguments()))
            .find(|a| a.get_long() == Some(key))
            .map(|a| a.get_action().takes_values())
    };
    let mut merged = argv.clone();
    for (key, value) in entries {
        let flag = format!("--{key}");
        let given = argv
            .iter()
            .any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        match takes_value(&key) {
            Some(true) => merged.extend([flag, value]),
            Some(false) => match value.as_str() {
                "true" => merged.push(flag),
                "false" => {}
                _ => {
                    return Err(CliError::Usage(format!(
                        "config key `{key}` expects true or false"
                    )))
                }
            },
            None => return Err(CliError::Usage(format!("unknown config key `{key}`"))),
        }
    }
    Ok(merged)
}

pub fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("BGSOL_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("BGSOL_SEED `{v}` is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}
