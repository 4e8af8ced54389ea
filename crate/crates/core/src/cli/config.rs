use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PacketSpec, MIN_GRID_N, MIN_PAD};

/// Products a run can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Entropy,
    DensityX,
    DensityP,
    KernelCheck,
    Validate,
}

/// Flat JSON run configuration. Missing fields take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mass: f64,
    pub hbar: f64,
    pub sigma: f64,
    pub p0: f64,
    pub x0: f64,
    pub force: f64,
    pub t_max: f64,
    pub n_t: usize,
    pub grid_n: usize,
    pub pad: f64,
    pub outputs: BTreeSet<Output>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mass: 1.0,
            hbar: 1.0,
            sigma: 1.0,
            p0: 0.0,
            x0: 0.0,
            force: 1.0,
            t_max: 5.0,
            n_t: 101,
            grid_n: 4096,
            pad: 8.0,
            outputs: [Output::Entropy, Output::DensityX, Output::DensityP]
                .into_iter()
                .collect(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads from `path`, or from standard input when `path` is `-`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = if path.as_os_str() == "-" {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Config(format!("reading stdin: {e}")))?;
            buf
        } else {
            std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("reading {}: {e}", path.display())))?
        };
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.packet()?;
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::Config(format!(
                "t_max = {} must be positive",
                self.t_max
            )));
        }
        if self.n_t < 2 {
            return Err(Error::Config(format!(
                "n_t = {} must be at least 2",
                self.n_t
            )));
        }
        if self.grid_n < MIN_GRID_N || !self.grid_n.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid_n = {} must be a power of two and at least {MIN_GRID_N}",
                self.grid_n
            )));
        }
        if !(self.pad.is_finite() && self.pad >= MIN_PAD) {
            return Err(Error::Config(format!(
                "pad = {} must be at least {MIN_PAD}",
                self.pad
            )));
        }
        Ok(())
    }

    pub fn packet(&self) -> Result<PacketSpec> {
        PacketSpec::new(
            self.mass, self.hbar, self.sigma, self.p0, self.x0, self.force,
        )
        .map_err(|e| Error::Config(e.to_string()))
    }

    /// `n_t` uniformly spaced times on `[0, t_max]`.
    pub fn times(&self) -> Vec<f64> {
        let last = (self.n_t - 1) as f64;
        (0..self.n_t)
            .map(|k| self.t_max * k as f64 / last)
            .collect()
    }

    pub fn wants(&self, output: Output) -> bool {
        self.outputs.contains(&output)
    }
}
