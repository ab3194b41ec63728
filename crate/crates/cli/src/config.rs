//! Suite configuration: the JSON file read by `hsframe suite` plus the
//! small option types shared with the `check` subcommand.

use std::fmt;
use std::str::FromStr;

use hsframe_core::generators::GenSpec;
use hsframe_core::identities::{default_lambda_grid, Theorem, ToleranceConfig};
use hsframe_core::{FrameError, Result, SubsetPolicy};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Environment variable consulted when no seed is given explicitly.
pub const SEED_ENV: &str = "HSFRAME_SEED";

/// Seed resolution order: command-line flag, then config file, then the
/// `HSFRAME_SEED` environment variable, then zero.
pub fn resolve_seed(flag: Option<u64>, config: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag.or(config) {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text.trim().parse::<u64>().map_err(|_| {
            FrameError::InvalidParameter(format!(
                "{SEED_ENV} must be an unsigned integer, got '{text}'"
            ))
        }),
        Err(_) => Ok(0),
    }
}

/// Which index subsets a sweep visits: `auto` defers to the frame size,
/// `all` forces exhaustive enumeration, `random:<k>` samples `k` subsets
/// on top of the forced corner cases.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SubsetMode {
    #[default]
    Auto,
    All,
    Random(usize),
}

impl SubsetMode {
    pub fn policy(self, len: usize) -> SubsetPolicy {
        match self {
            SubsetMode::Auto => SubsetPolicy::default_for(len),
            SubsetMode::All => SubsetPolicy::All,
            SubsetMode::Random(k) => SubsetPolicy::Random(k),
        }
    }
}

impl fmt::Display for SubsetMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubsetMode::Auto => f.write_str("auto"),
            SubsetMode::All => f.write_str("all"),
            SubsetMode::Random(k) => write!(f, "random:{k}"),
        }
    }
}

impl FromStr for SubsetMode {
    type Err = FrameError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(SubsetMode::Auto),
            "all" => Ok(SubsetMode::All),
            _ => {
                if let Some(count) = s.strip_prefix("random:") {
                    let k = count.parse::<usize>().map_err(|_| {
                        FrameError::InvalidParameter(format!(
                            "subset mode 'random:<k>' needs an unsigned count, got '{count}'"
                        ))
                    })?;
                    if k == 0 {
                        return Err(FrameError::InvalidParameter(
                            "subset mode 'random:<k>' needs k >= 1".into(),
                        ));
                    }
                    Ok(SubsetMode::Random(k))
                } else {
                    Err(FrameError::InvalidParameter(format!(
                        "unknown subset mode '{s}'; expected auto, all, or random:<k>"
                    )))
                }
            }
        }
    }
}

impl Serialize for SubsetMode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SubsetMode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(D::Error::custom)
    }
}

/// Row output encoding: one JSON object per line, or flat CSV.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Jsonl,
    Csv,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutputFormat::Jsonl => f.write_str("jsonl"),
            OutputFormat::Csv => f.write_str("csv"),
        }
    }
}

impl FromStr for OutputFormat {
    type Err = FrameError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(OutputFormat::Jsonl),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(FrameError::InvalidParameter(format!(
                "unknown output format '{s}'; expected jsonl or csv"
            ))),
        }
    }
}

impl Serialize for OutputFormat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OutputFormat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(D::Error::custom)
    }
}

fn default_trials() -> usize {
    1
}

fn default_theorems() -> Vec<Theorem> {
    Theorem::ALL.to_vec()
}

fn default_vectors() -> usize {
    20
}

/// Everything `hsframe suite` needs, read from one JSON file. Every
/// field except the generator recipe has a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    /// Frame recipe run once per trial with a per-trial seed.
    pub gen: GenSpec,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_theorems")]
    pub theorems: Vec<Theorem>,
    #[serde(default = "default_lambda_grid")]
    pub lambda_grid: Vec<f64>,
    #[serde(default)]
    pub subset_mode: SubsetMode,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    /// Master seed; a `--seed` flag wins over it, `HSFRAME_SEED` loses.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub format: OutputFormat,
    /// Test vectors drawn per trial (basis vectors first).
    #[serde(default = "default_vectors")]
    pub vectors: usize,
}

impl SuiteConfig {
    pub fn new(gen: GenSpec) -> Self {
        Self {
            gen,
            trials: default_trials(),
            theorems: default_theorems(),
            lambda_grid: default_lambda_grid(),
            subset_mode: SubsetMode::default(),
            tolerances: ToleranceConfig::default(),
            seed: None,
            format: OutputFormat::default(),
            vectors: default_vectors(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(FrameError::InvalidParameter("trials must be at least 1".into()));
        }
        if self.theorems.is_empty() {
            return Err(FrameError::InvalidParameter("theorems must not be empty".into()));
        }
        if self.vectors == 0 {
            return Err(FrameError::InvalidParameter("vectors must be at least 1".into()));
        }
        if self.lambda_grid.is_empty() {
            return Err(FrameError::InvalidParameter("lambda_grid must not be empty".into()));
        }
        for &lambda in &self.lambda_grid {
            if !(0.0..=1.0).contains(&lambda) || !lambda.is_finite() {
                return Err(FrameError::InvalidParameter(format!(
                    "lambda_grid entries must lie in [0, 1], got {lambda}"
                )));
            }
        }
        self.tolerances.validate()
    }
}
