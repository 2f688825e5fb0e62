//! Run configuration: JSON text with defaults and range checks.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn default_resolution() -> usize {
    512
}

fn default_tolerance() -> f64 {
    1e-6
}

fn default_seed() -> u64 {
    42
}

fn default_true() -> bool {
    true
}

/// Which artifacts a run writes to the output directory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmitFlags {
    #[serde(default = "default_true")]
    pub report: bool,
    #[serde(default)]
    pub fields: bool,
    #[serde(default)]
    pub svg: bool,
}

impl Default for EmitFlags {
    fn default() -> Self {
        EmitFlags { report: true, fields: false, svg: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub f1: PathBuf,
    pub f2: PathBuf,
    pub epsilon: f64,
    /// Defaults to `min(delta, epsilon) / 10` once `delta` is measured.
    #[serde(default)]
    pub delta_prime: Option<f64>,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub emit: EmitFlags,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl RunConfig {
    pub fn new(f1: impl Into<PathBuf>, f2: impl Into<PathBuf>, epsilon: f64) -> Self {
        RunConfig {
            f1: f1.into(),
            f2: f2.into(),
            epsilon,
            delta_prime: None,
            resolution: default_resolution(),
            tolerance: default_tolerance(),
            out: None,
            emit: EmitFlags::default(),
            seed: default_seed(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Config(format!("epsilon {} must lie in (0, 1)", self.epsilon)));
        }
        if let Some(dp) = self.delta_prime {
            if !(dp > 0.0 && dp < 1.0) {
                return Err(Error::Config(format!("delta_prime {dp} must lie in (0, 1)")));
            }
        }
        if !self.resolution.is_power_of_two() || !(128..=4096).contains(&self.resolution) {
            return Err(Error::Config(format!("resolution {} must be a power of two in [128, 4096]", self.resolution)));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Config(format!("tolerance {} must be positive", self.tolerance)));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Parses and validates a JSON config; missing optional fields take their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
    cfg.validate()?;
    Ok(cfg)
}
