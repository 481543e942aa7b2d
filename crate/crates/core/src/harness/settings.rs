//! Flat key-value run configuration.
//!
//! ```text
//! # comment
//! dims = 3,4,5,6
//! corrections = 4000        # omit to use the per-dimension defaults
//! trials = 100000000
//! seconds = 86400
//! log_every = 50
//! seesaw_iters = 200
//! lambda_restarts = 200
//! real_only = true
//! seed = 1
//! output_dir = out
//! ```

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::gilbert::GilbertConfig;
use crate::herm::fnv1a64;

/// Correction budgets used when the config does not override them: the long
/// 3x3 run and the shorter large-dimension budgets.
pub fn default_corrections(d: usize) -> u64 {
    match d {
        3 => 25_100,
        4 | 5 => 4_000,
        6 => 3_500,
        _ => 4_000,
    }
}

/// Per-state seed: master seed XOR a stable hash of the layout name, so
/// batches parallelize without order dependence.
pub fn derive_seed(master: u64, layout_name: &str) -> u64 {
    master ^ fnv1a64(layout_name.as_bytes())
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub dims: Vec<usize>,
    /// Overrides the per-dimension correction budgets when set.
    pub corrections: Option<u64>,
    pub trials: u64,
    pub seconds: f64,
    pub log_every: u64,
    pub seesaw_iters: u32,
    pub lambda_restarts: u32,
    pub real_only: bool,
    pub seed: u64,
    pub output_dir: PathBuf,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            dims: vec![3, 4, 5, 6],
            corrections: None,
            trials: 100_000_000,
            seconds: f64::INFINITY,
            log_every: 50,
            seesaw_iters: 200,
            lambda_restarts: 200,
            // The family's closest separable states are reachable through
            // real mixtures, which converge faster.
            real_only: true,
            seed: 1,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl Settings {
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut settings = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| {
                    Error::Config(format!("line {}: expected `key = value`", lineno + 1))
                })?;
            if value.is_empty() {
                return Err(Error::Config(format!("line {}: empty value", lineno + 1)));
            }
            match key {
                "dims" => {
                    settings.dims = value
                        .split(',')
                        .map(|s| {
                            s.trim()
                                .parse::<usize>()
                                .map_err(|e| Error::Config(format!("bad dims entry `{s}`: {e}")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if settings.dims.is_empty() {
                        return Err(Error::Config("dims list is empty".into()));
                    }
                }
                "corrections" => settings.corrections = Some(parse_num(key, value)?),
                "trials" => settings.trials = parse_num(key, value)?,
                "seconds" => settings.seconds = parse_num(key, value)?,
                "log_every" => settings.log_every = parse_num(key, value)?,
                "seesaw_iters" => settings.seesaw_iters = parse_num(key, value)?,
                "lambda_restarts" => settings.lambda_restarts = parse_num(key, value)?,
                "real_only" => {
                    settings.real_only = match value {
                        "true" | "1" => true,
                        "false" | "0" => false,
                        other => {
                            return Err(Error::Config(format!("bad real_only value `{other}`")))
                        }
                    }
                }
                "seed" => settings.seed = parse_num(key, value)?,
                "output_dir" => settings.output_dir = PathBuf::from(value),
                other => return Err(Error::Config(format!("unknown key `{other}`"))),
            }
        }
        settings.check()?;
        Ok(settings)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_str(&text)
    }

    fn check(&self) -> Result<()> {
        if self.corrections == Some(0) || self.trials == 0 || self.log_every == 0 {
            return Err(Error::Config("limits must be positive".into()));
        }
        if !(self.seconds > 0.0) {
            return Err(Error::Config("seconds must be positive".into()));
        }
        if self.seesaw_iters == 0 || self.lambda_restarts == 0 {
            return Err(Error::Config("iteration counts must be positive".into()));
        }
        for &d in &self.dims {
            if !(3..=12).contains(&d) {
                return Err(Error::Config(format!("dimension {d} outside 3..=12")));
            }
        }
        Ok(())
    }

    /// Projection config for one layout, with the per-state derived seed.
    pub fn gilbert_config(&self, d: usize, layout_name: &str) -> GilbertConfig {
        GilbertConfig {
            max_corrections: self.corrections.unwrap_or_else(|| default_corrections(d)),
            max_trials: self.trials,
            max_seconds: self.seconds,
            log_every: self.log_every,
            seesaw_iters: self.seesaw_iters,
            real_only: self.real_only,
            seed: derive_seed(self.seed, layout_name),
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::Config(format!("bad {key} value `{value}`: {e}")))
}
