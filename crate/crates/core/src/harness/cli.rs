//! Command-line parsing for `cdr-sim`.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use super::{SingleConfig, SweepConfig};
use crate::algorithms::PiaInit;

#[derive(Debug, Parser)]
#[command(
    name = "cdr-sim",
    version,
    about = "Relay beamforming sum-rate simulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Monte Carlo sweep over SNR and antenna count, written as CSV.
    Sweep(Box<SweepArgs>),
    /// One channel draw evaluated by every scheme.
    Single(SingleArgs),
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Antenna counts, e.g. `1,2,4,8`.
    #[arg(long)]
    antennas: Option<String>,
    /// SNR points in dB: a list `0,10,20` or a range `0:5:30`.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    /// Scheme names, e.g. `pia,upper`.
    #[arg(long)]
    algorithms: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// `key=value` file read before the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "pia-max-iter")]
    pia_max_iter: Option<String>,
    /// pureamp, maxsnr1, maxsinr2 or ones.
    #[arg(long = "pia-init")]
    pia_init: Option<String>,
    #[arg(long)]
    threads: Option<String>,
}

#[derive(Debug, Args)]
struct SingleArgs {
    #[arg(long)]
    antennas: usize,
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Print the beamforming matrices too.
    #[arg(long = "dump-solution")]
    dump_solution: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Sweep(SweepConfig),
    Single(SingleConfig),
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Also carries `--help` and `--version` output.
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("{0}")]
    Usage(String),
    #[error("reading config file {path}: {source}")]
    Config {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) => e.exit_code(),
            CliError::Usage(_) => 2,
            CliError::Config { .. } => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn number<T: FromStr>(key: &str, s: &str) -> Result<T, CliError> {
    s.trim()
        .parse()
        .map_err(|_| usage(format!("{key}: cannot parse `{s}`")))
}

fn list<T: FromStr>(key: &str, s: &str) -> Result<Vec<T>, CliError> {
    let v = s
        .split(',')
        .map(|x| number(key, x))
        .collect::<Result<Vec<T>, _>>()?;
    Ok(v)
}

/// `a:step:b` (inclusive) or a comma-separated list.
pub fn parse_snr_list(s: &str) -> Result<Vec<f64>, CliError> {
    let key = "snr-db";
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [_] => list(key, s),
        [a, step, b] => {
            let (a, step, b): (f64, f64, f64) =
                (number(key, a)?, number(key, step)?, number(key, b)?);
            if !(a.is_finite() && b.is_finite() && step.is_finite())
                || step == 0.0
                || (b - a) * step < 0.0
            {
                return Err(usage(format!("{key}: `{s}` is not a valid a:step:b range")));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize + 1;
            Ok((0..n).map(|k| a + k as f64 * step).collect())
        }
        _ => Err(usage(format!(
            "{key}: expected a list or a:step:b, got `{s}`"
        ))),
    }
}

fn apply(cfg: &mut SweepConfig, key: &str, value: &str) -> Result<(), CliError> {
    match key {
        "antennas" => cfg.antennas = list(key, value)?,
        "snr-db" | "snr_db" => cfg.snr_db = parse_snr_list(value)?,
        "trials" => cfg.trials = number(key, value)?,
        "algorithms" => {
            cfg.algorithms = value
                .split(',')
                .map(|a| a.trim().to_string())
                .filter(|a| !a.is_empty())
                .collect()
        }
        "seed" => cfg.seed = number(key, value)?,
        "out" => cfg.out = PathBuf::from(value.trim()),
        "pia-max-iter" | "pia_max_iter" => cfg.pia.max_iter = number(key, value)?,
        "pia-init" | "pia_init" => {
            cfg.pia.init = value
                .trim()
                .parse::<PiaInit>()
                .map_err(|e| usage(e.to_string()))?
        }
        "threads" => cfg.threads = Some(number(key, value)?),
        _ => return Err(usage(format!("unknown config key `{key}`"))),
    }
    Ok(())
}

/// Applies a `key=value` config text; `#` starts a comment.
pub fn apply_config_text(cfg: &mut SweepConfig, text: &str) -> Result<(), CliError> {
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key=value", n + 1)))?;
        apply(cfg, k.trim(), v)?;
    }
    Ok(())
}

fn load_config(cfg: &mut SweepConfig, path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Config {
        path: path.to_path_buf(),
        source,
    })?;
    apply_config_text(cfg, &text)
}

fn sweep_config(a: SweepArgs) -> Result<SweepConfig, CliError> {
    let mut cfg = SweepConfig::default();
    if let Some(path) = &a.config {
        load_config(&mut cfg, path)?;
    }
    let flags = [
        ("antennas", a.antennas),
        ("snr-db", a.snr_db),
        ("trials", a.trials),
        ("algorithms", a.algorithms),
        ("seed", a.seed),
        ("pia-max-iter", a.pia_max_iter),
        ("pia-init", a.pia_init),
        ("threads", a.threads),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            apply(&mut cfg, k, &v)?;
        }
    }
    if let Some(out) = a.out {
        cfg.out = out;
    }
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    Ok(cfg)
}

pub fn parse_cli<I, T>(argv: I) -> Result<Command, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(argv)?.command {
        Cmd::Sweep(a) => Ok(Command::Sweep(sweep_config(*a)?)),
        Cmd::Single(a) => {
            if a.antennas == 0 || !a.snr_db.is_finite() {
                return Err(usage(
                    "single: antennas must be positive and the SNR finite",
                ));
            }
            Ok(Command::Single(SingleConfig {
                antennas: a.antennas,
                snr_db: a.snr_db,
                seed: a.seed,
                dump_solution: a.dump_solution,
            }))
        }
    }
}
