//! The JSON run configuration shared by every subcommand.
//!
//! ```json
//! {
//!   "channel": { "a": 2.0, "b": 0.5, "p1": 6.0, "p2": 6.0, "mu": 0.5 },
//!   "weights": { "mu0": 1.0, "mu1": 1.0, "mu2": 0.0 },
//!   "split":   { "alpha": 0.5, "beta": 0.5 },
//!   "grid":    { "alpha_steps": 101, "beta_steps": 101, "refine_iters": 60 },
//!   "sim":     { "samples": 1000000, "seed": 42 },
//!   "output":  { "format": "json", "path": "report.json" }
//! }
//! ```
//!
//! Only `channel` is required. Unknown fields are rejected at every level.

use std::path::{Path, PathBuf};

use pcrc_core::{ChannelParams, PowerSplit, SplitGrid, Weights};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_samples() -> u64 {
    1_000_000
}

fn default_seed() -> u64 {
    42
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection {
            samples: default_samples(),
            seed: default_seed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub channel: ChannelParams,
    #[serde(default = "default_weights")]
    pub weights: Weights,
    #[serde(default = "default_split")]
    pub split: PowerSplit,
    #[serde(default)]
    pub grid: SplitGrid,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub output: OutputSection,
}

fn default_weights() -> Weights {
    Weights::new(1.0, 1.0, 1.0).expect("positive weights")
}

fn default_split() -> PowerSplit {
    PowerSplit::new(0.5, 0.5).expect("split in range")
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.grid
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if cfg.sim.samples == 0 {
            return Err(ConfigError::Invalid("sim.samples must be >= 1".into()));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Replaces alpha and/or beta, re-validating the split.
    pub fn override_split(
        &mut self,
        alpha: Option<f64>,
        beta: Option<f64>,
    ) -> Result<(), ConfigError> {
        let alpha = alpha.unwrap_or(self.split.alpha());
        let beta = beta.unwrap_or(self.split.beta());
        self.split =
            PowerSplit::new(alpha, beta).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(())
    }
}
