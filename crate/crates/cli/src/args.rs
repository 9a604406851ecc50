use std::ffi::OsString;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "pfrelay",
    version,
    about = "Outage and capacity sweeps for dual-hop project-and-forward relaying"
)]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the SNR threshold and report outage probability.
    Outage(Common),
    /// Sweep the balance parameter and report ergodic capacity.
    Capacity(CapacityArgs),
    /// Run the built-in numerical checks.
    Selftest(Common),
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    #[command(flatten)]
    pub common: Common,
    /// Also integrate the numerical density (slow).
    #[arg(long)]
    pub numeric: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Key-value file supplying defaults for any flag.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Source antennas.
    #[arg(long, default_value_t = 2)]
    pub ns: u32,
    /// Relay antennas.
    #[arg(long, default_value_t = 2)]
    pub nr: u32,
    /// Average source-relay SNR in dB.
    #[arg(long = "snr-sr-db", default_value_t = 0.0, allow_negative_numbers = true)]
    pub snr_sr_db: f64,
    /// Average relay-destination SNR in dB (outage sweeps).
    #[arg(long = "snr-rd-db", default_value_t = 10.0, allow_negative_numbers = true)]
    pub snr_rd_db: f64,
    /// Threshold grid in dB, `start:step:stop`.
    #[arg(long = "th-db", default_value = "-30:1:10", value_parser = parse_grid, allow_hyphen_values = true)]
    pub th_db: Grid,
    /// Balance-parameter grid in dB, `start:step:stop`.
    #[arg(long, default_value = "-20:10:20", value_parser = parse_grid, allow_hyphen_values = true)]
    pub beta: Grid,
    /// Monte-Carlo trials per grid point.
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Outer series truncation.
    #[arg(long = "K", default_value_t = 50)]
    pub k: usize,
    /// Inner series truncation.
    #[arg(long = "L", default_value_t = 5)]
    pub l: usize,
    /// Contour half-length.
    #[arg(long = "W", default_value_t = 10.0)]
    pub w: f64,
    /// Grid points evaluated concurrently.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Output file (standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Record wall time per row (makes output run-dependent).
    #[arg(long)]
    pub timing: bool,
}

/// Inclusive arithmetic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

const MAX_GRID_POINTS: usize = 100_000;

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
    match parts.as_slice() {
        [v] => Ok(Grid(vec![num(v)?])),
        [a, st, b] => {
            let (start, step, stop) = (num(a)?, num(st)?, num(b)?);
            if !(start.is_finite() && step.is_finite() && stop.is_finite()) {
                return Err("grid bounds must be finite".into());
            }
            if step == 0.0 || (stop - start) * step < 0.0 {
                return Err(format!("step {step} does not lead from {start} to {stop}"));
            }
            let span = (stop - start) / step;
            let n = (span + 1e-9).floor() as usize + 1;
            if n > MAX_GRID_POINTS {
                return Err(format!("grid has {n} points, limit is {MAX_GRID_POINTS}"));
            }
            Ok(Grid((0..n).map(|i| start + i as f64 * step).collect()))
        }
        _ => Err(format!("expected `start:step:stop` or a single value, got `{s}`")),
    }
}

/// Reads `key = value` lines (`#` starts a comment) into flag arguments.
pub fn config_file_args(path: &Path) -> anyhow::Result<Vec<OsString>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config file {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => match line.split_once(char::is_whitespace) {
                Some((k, v)) => (k.trim(), v.trim()),
                None => (line, ""),
            },
        };
        let key = key.trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key == "config" {
            bail!("{}:{}: invalid key `{key}`", path.display(), i + 1);
        }
        match value {
            "" | "true" => out.push(format!("--{key}").into()),
            "false" => {}
            v => out.push(format!("--{key}={v}").into()),
        }
    }
    Ok(out)
}

/// Location of a `--config` value in the raw arguments.
pub fn find_config(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}
