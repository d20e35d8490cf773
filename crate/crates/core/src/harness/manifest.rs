use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::chaos::{generate_dataset, FlowSpec, TimeSeries};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::metrics::{MetricPreset, DEFAULT_E_MAX};
use crate::readout::ExperimentConfig;
use crate::seed::{derive_seed, fnv1a};

/// Transient steps dropped before the first kept point.
pub const DEFAULT_DISCARD: usize = 1000;

/// Where the trajectory comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub flow: FlowSpec,
    pub discard: usize,
    /// FNV-1a of the flow's JSON form.
    pub preset_hash: String,
}

impl DatasetSpec {
    pub fn new(flow: FlowSpec, discard: usize) -> Result<Self> {
        let preset_hash = format!("{:016x}", fnv1a(serde_json::to_string(&flow)?));
        Ok(Self { flow, discard, preset_hash })
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    /// One seed per realization, derived positionally from `config.seed`.
    pub seeds: Vec<u64>,
    pub dataset: DatasetSpec,
    #[serde(default = "default_e_max")]
    pub e_max: f64,
    /// Overrides the built-in metric preset of the system.
    #[serde(default)]
    pub metrics: Option<MetricPreset>,
    #[serde(default)]
    pub execution: Execution,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub timestamp: Option<String>,
}

fn default_e_max() -> f64 {
    DEFAULT_E_MAX
}

pub(crate) fn realization_seeds(master: u64, n: usize) -> Vec<u64> {
    (0..n as u64).map(|i| derive_seed(master, "realization", i)).collect()
}

impl RunManifest {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let dataset = DatasetSpec::new(config.system.preset(), DEFAULT_DISCARD)?;
        Ok(Self {
            seeds: realization_seeds(config.seed, config.n_stat),
            config,
            dataset,
            e_max: DEFAULT_E_MAX,
            metrics: None,
            execution: Execution::default(),
            output_dir: None,
            timestamp: None,
        })
    }

    /// Re-derive the seeds after editing `config.seed` or `config.n_stat`.
    pub fn reseed(&mut self) {
        self.seeds = realization_seeds(self.config.seed, self.config.n_stat);
    }

    pub fn with_config(&self, config: ExperimentConfig) -> Result<Self> {
        let mut m = self.clone();
        m.config = config;
        m.reseed();
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if self.seeds.len() != self.config.n_stat {
            return Err(Error::InvalidArgument(format!(
                "{} seeds for n_stat = {}",
                self.seeds.len(),
                self.config.n_stat
            )));
        }
        if self.dataset.flow.system() != self.config.system {
            return Err(Error::InvalidArgument(format!(
                "dataset flow is {} but the config targets {}",
                self.dataset.flow.system(),
                self.config.system
            )));
        }
        if !(self.e_max > 0.0) {
            return Err(Error::InvalidArgument("e_max must be positive".into()));
        }
        Ok(())
    }

    pub fn preset(&self) -> MetricPreset {
        self.metrics.clone().unwrap_or_else(|| MetricPreset::for_system(self.config.system).clone())
    }

    /// Trajectory long enough for `n_stat` disjoint windows.
    pub fn generate(&self) -> Result<TimeSeries> {
        generate_dataset(&self.dataset.flow, self.config.n_stat * self.config.window_len(), self.dataset.discard)
    }

    /// Window of realization `i`: points `[i·L, (i+1)·L)` with `L = N_sync + N_train + N_pred`.
    pub fn window(&self, data: &TimeSeries, i: usize) -> Result<TimeSeries> {
        let len = self.config.window_len();
        if data.len() < (i + 1) * len {
            return Err(Error::SeriesTooShort { required: (i + 1) * len, available: data.len() });
        }
        data.slice(i * len, len)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::System;

    #[test]
    fn seeds_are_positional() {
        let mut c = ExperimentConfig::best(System::Lorenz63);
        c.n_stat = 3;
        let short = RunManifest::new(c.clone()).unwrap();
        c.n_stat = 5;
        let long = RunManifest::new(c).unwrap();
        assert_eq!(short.seeds[..], long.seeds[..3]);
        assert_eq!(long.seeds.len(), 5);
    }

    #[test]
    fn mismatched_seed_count_rejected() {
        let mut m = RunManifest::new(ExperimentConfig::best(System::Chen)).unwrap();
        m.seeds.pop();
        assert!(m.validate().is_err());
    }

    #[test]
    fn manifest_json_round_trip() {
        let m = RunManifest::new(ExperimentConfig::best(System::Thomas)).unwrap();
        let back: RunManifest = serde_json::from_str(&serde_json::to_string_pretty(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.preset().lambda_true, 0.033);
    }
}
