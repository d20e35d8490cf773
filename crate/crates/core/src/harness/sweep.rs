use rand::Rng;
use serde::{Deserialize, Serialize};

use super::run::run_on;
use super::{RunManifest, Summary};
use crate::error::{Error, Result};
use crate::metrics::EvaluationReport;
use crate::readout::{legal_intervals, ExperimentConfig};
use crate::reservoir::{Dynamics, DEFAULT_SUBSTEPS};
use crate::seed::{derive_seed, rng_from_seed};

/// One point of the hyperparameter space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyper {
    #[serde(rename = "V")]
    pub v: usize,
    pub r: usize,
    #[serde(rename = "G")]
    pub g: usize,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
}

impl Hyper {
    pub fn apply(&self, base: &ExperimentConfig) -> ExperimentConfig {
        ExperimentConfig { v: self.v, r: self.r, g: self.g, beta: self.beta, a: self.a, b: self.b, ..base.clone() }
    }

    pub fn with_beta(self, beta: f64) -> Self {
        Self { beta, ..self }
    }
}

/// The six reference configurations of the β study, at β = 1e-10.
pub fn table_s1_configs() -> [Hyper; 6] {
    let h = |v, r, g, a: f64| Hyper { v, r, g, beta: 1e-10, a, b: 1.0 - a };
    [h(3, 1, 1, 0.1), h(4, 2, 3, 0.2), h(5, 1, 1, 0.2), h(5, 1, 2, 0.15), h(10, 1, 3, 0.1), h(4, 1, 4, 0.25)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    #[default]
    Random,
    Grid,
}

/// Search ranges. Integer ranges are inclusive; intervals are `k` in `[0.05k, 1 - 0.05k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    #[serde(default)]
    pub mode: SearchMode,
    /// Trials drawn in random mode.
    pub budget: usize,
    /// Realizations per trial.
    pub n_stat: usize,
    #[serde(rename = "V")]
    pub v: [usize; 2],
    pub r: [usize; 2],
    #[serde(rename = "G")]
    pub g: [usize; 2],
    pub log10_beta: [f64; 2],
    pub intervals: Vec<usize>,
    /// Grid mode: β values crossed with the integer ranges and intervals.
    #[serde(default)]
    pub betas: Vec<f64>,
    /// Grid mode: explicit configurations replacing the Cartesian ranges.
    #[serde(default)]
    pub configs: Vec<Hyper>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            mode: SearchMode::Random,
            budget: 20,
            n_stat: 5,
            v: [1, 15],
            r: [1, 3],
            g: [1, 4],
            log10_beta: [-19.0, 2.0],
            intervals: (1..=9).collect(),
            betas: Vec::new(),
            configs: Vec::new(),
        }
    }
}

fn interval(k: usize) -> (f64, f64) {
    legal_intervals()[k - 1]
}

impl SweepSpec {
    /// The β study: six reference configurations at four ridge parameters.
    pub fn table_s1_beta_grid(n_stat: usize) -> Self {
        Self {
            mode: SearchMode::Grid,
            budget: 24,
            n_stat,
            betas: vec![1e-1, 1e-3, 1e-10, 1e-20],
            configs: table_s1_configs().to_vec(),
            ..Self::default()
        }
    }

    pub fn validate(&self, allow_out_of_space: bool) -> Result<()> {
        if self.n_stat == 0 {
            return Err(Error::InvalidArgument("sweep needs n_stat >= 1".into()));
        }
        if self.mode == SearchMode::Random && self.budget == 0 {
            return Err(Error::InvalidArgument("sweep budget must be at least 1".into()));
        }
        let ordered = |r: [usize; 2]| r[0] <= r[1];
        if !(ordered(self.v) && ordered(self.r) && ordered(self.g) && self.log10_beta[0] <= self.log10_beta[1]) {
            return Err(Error::InvalidArgument("sweep ranges must be ordered low..high".into()));
        }
        if self.intervals.is_empty() && self.configs.is_empty() {
            return Err(Error::InvalidArgument("no scaling intervals to search".into()));
        }
        if self.intervals.iter().any(|&k| !(1..=9).contains(&k)) {
            return Err(Error::OutOfSpace("interval index must be in 1..=9".into()));
        }
        if allow_out_of_space {
            return Ok(());
        }
        let inside = |r: [usize; 2], lo, hi| r[0] >= lo && r[1] <= hi;
        if !(inside(self.v, 1, 15) && inside(self.r, 1, 3) && inside(self.g, 1, 4)) {
            return Err(Error::OutOfSpace("integer ranges exceed V 1..=15, r 1..=3, G 1..=4".into()));
        }
        if !(self.log10_beta[0] > -20.0 && self.log10_beta[1] < 3.0) {
            return Err(Error::OutOfSpace("beta range must lie inside (1e-20, 1e3)".into()));
        }
        Ok(())
    }

    /// Configurations in evaluation order.
    pub fn candidates(&self, master: u64) -> Vec<Hyper> {
        match self.mode {
            SearchMode::Random => (0..self.budget as u64)
                .map(|t| {
                    let mut rng = rng_from_seed(derive_seed(master, "trial", t));
                    let v = rng.random_range(self.v[0]..=self.v[1]);
                    let r = rng.random_range(self.r[0]..=self.r[1]);
                    let g = rng.random_range(self.g[0]..=self.g[1]);
                    let beta = 10f64.powf(rng.random_range(self.log10_beta[0]..=self.log10_beta[1]));
                    let (a, b) = interval(self.intervals[rng.random_range(0..self.intervals.len())]);
                    Hyper { v, r, g, beta, a, b }
                })
                .collect(),
            SearchMode::Grid if !self.configs.is_empty() => {
                if self.betas.is_empty() {
                    return self.configs.clone();
                }
                self.configs.iter().flat_map(|c| self.betas.iter().map(|&b| c.with_beta(b))).collect()
            }
            SearchMode::Grid => {
                let betas =
                    if self.betas.is_empty() { vec![10f64.powf(self.log10_beta[0])] } else { self.betas.clone() };
                let mut out = Vec::new();
                for v in self.v[0]..=self.v[1] {
                    for r in self.r[0]..=self.r[1] {
                        for g in self.g[0]..=self.g[1] {
                            for &beta in &betas {
                                for &k in &self.intervals {
                                    let (a, b) = interval(k);
                                    out.push(Hyper { v, r, g, beta, a, b });
                                }
                            }
                        }
                    }
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub trial: usize,
    pub hyper: Hyper,
    pub summary: Summary,
}

/// Evaluate every candidate on common data and seeds; best mean horizon first.
pub fn sweep(spec: &SweepSpec, base: &RunManifest) -> Result<Vec<Trial>> {
    spec.validate(base.config.allow_out_of_space)?;
    let candidates = spec.candidates(base.config.seed);
    let mut config = base.config.clone();
    config.n_stat = spec.n_stat;
    let probe = base.with_config(config.clone())?;
    let data = probe.generate()?;
    let mut trials = Vec::with_capacity(candidates.len());
    for (t, hyper) in candidates.into_iter().enumerate() {
        let summary = match base.with_config(hyper.apply(&config)) {
            Ok(manifest) => run_on(&manifest, &data)?.summary,
            Err(e) => return Err(Error::OutOfSpace(format!("trial {t}: {e}"))),
        };
        trials.push(Trial { trial: t, hyper, summary });
    }
    trials.sort_by(|x, y| y.summary.mean_horizon().total_cmp(&x.summary.mean_horizon()).then(x.trial.cmp(&y.trial)));
    Ok(trials)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisePoint {
    pub gamma: f64,
    pub summary: Summary,
    pub reports: Vec<EvaluationReport>,
}

/// Repeat the base run under Lindblad dephasing at each rate.
pub fn noise_sweep(base: &RunManifest, gammas: &[f64]) -> Result<Vec<NoisePoint>> {
    if base.config.r != 1 {
        return Err(Error::InvalidArgument(format!(
            "noise sweep uses one reservoir, config has r = {}",
            base.config.r
        )));
    }
    if gammas.is_empty() {
        return Err(Error::InvalidArgument("no dephasing rates given".into()));
    }
    base.validate()?;
    let data = base.generate()?;
    gammas
        .iter()
        .map(|&gamma| {
            let mut config = base.config.clone();
            config.dynamics = Dynamics::Dephasing { gamma, substeps: DEFAULT_SUBSTEPS };
            let manifest = base.with_config(config)?;
            let outcome = run_on(&manifest, &data)?;
            Ok(NoisePoint { gamma, summary: outcome.summary, reports: outcome.reports })
        })
        .collect()
}
