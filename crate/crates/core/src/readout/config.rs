use serde::{Deserialize, Serialize};

use crate::chaos::System;
use crate::error::{Error, Result};
use crate::preprocess::check_interval;
use crate::reservoir::{Dynamics, IsingParams};

const INTERVAL_TOL: f64 = 1e-9;

/// The nine admissible scaling intervals `[0.05k, 1 - 0.05k]`, `k = 1..9`.
pub fn legal_intervals() -> Vec<(f64, f64)> {
    (1..=9).map(|k| (0.05 * k as f64, 1.0 - 0.05 * k as f64)).collect()
}

/// One forecasting experiment: reservoir and readout hyperparameters plus run sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub system: System,
    #[serde(rename = "V")]
    pub v: usize,
    pub r: usize,
    #[serde(rename = "G")]
    pub g: usize,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub n_sync: usize,
    pub n_train: usize,
    pub n_pred: usize,
    pub n_stat: usize,
    pub seed: u64,
    #[serde(default)]
    pub dynamics: Dynamics,
    /// Skip the search-space bounds (structural checks still apply).
    #[serde(default)]
    pub allow_out_of_space: bool,
}

impl ExperimentConfig {
    /// Best published configuration for `system`, desk-scale run sizes.
    pub fn best(system: System) -> Self {
        let (v, g, beta, a) = match system {
            System::Lorenz63 => (9, 3, 1.41e-12, 0.15),
            System::Chen => (8, 3, 1.09e-12, 0.30),
            System::Chua => (14, 2, 2.69e-4, 0.10),
            System::Halvorsen => (8, 3, 1.41e-12, 0.20),
            System::Roessler => (9, 3, 2.10e-12, 0.20),
            System::Rucklidge => (7, 4, 1.25e-12, 0.15),
            System::Thomas => (15, 4, 1.89e-10, 0.05),
            System::Windmi => (10, 4, 9.13e-12, 0.05),
        };
        Self {
            system,
            v,
            r: 3,
            g,
            beta,
            a,
            b: 1.0 - a,
            n_sync: 100,
            n_train: 2000,
            n_pred: 2000,
            n_stat: 20,
            seed: 0,
            dynamics: Dynamics::Unitary,
            allow_out_of_space: false,
        }
    }

    pub fn ising(&self) -> IsingParams {
        IsingParams::default().with_multiplex(self.v)
    }

    /// Points each realization consumes: sync + train + prediction truth.
    pub fn window_len(&self) -> usize {
        self.n_sync + self.n_train + self.n_pred
    }

    pub fn validate(&self) -> Result<()> {
        check_interval(self.a, self.b)?;
        if self.v == 0 || self.r == 0 || self.g == 0 {
            return Err(Error::InvalidArgument("V, r and G must be positive".into()));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidArgument(format!("beta must be > 0, got {}", self.beta)));
        }
        if self.n_train < 2 {
            return Err(Error::InvalidArgument("n_train must be at least 2".into()));
        }
        if self.n_stat == 0 {
            return Err(Error::InvalidArgument("n_stat must be at least 1".into()));
        }
        if let Dynamics::Dephasing { gamma, substeps } = self.dynamics {
            if !(gamma >= 0.0 && gamma.is_finite()) || substeps == 0 {
                return Err(Error::InvalidArgument("dephasing needs gamma >= 0 and substeps >= 1".into()));
            }
        }
        if self.allow_out_of_space {
            return Ok(());
        }
        let mut problems = Vec::new();
        if !(1..=15).contains(&self.v) {
            problems.push(format!("V={} not in 1..=15", self.v));
        }
        if !(1..=3).contains(&self.r) {
            problems.push(format!("r={} not in 1..=3", self.r));
        }
        if !(1..=4).contains(&self.g) {
            problems.push(format!("G={} not in 1..=4", self.g));
        }
        if !(self.beta > 1e-20 && self.beta < 1e3) {
            problems.push(format!("beta={:e} not in (1e-20, 1e3)", self.beta));
        }
        let legal = legal_intervals()
            .iter()
            .any(|&(a, b)| (a - self.a).abs() < INTERVAL_TOL && (b - self.b).abs() < INTERVAL_TOL);
        if !legal {
            problems.push(format!("[a,b]=[{}, {}] not on the 0.05 grid", self.a, self.b));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::OutOfSpace(problems.join("; ")))
        }
    }
}
