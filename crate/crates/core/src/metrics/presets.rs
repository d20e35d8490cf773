use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{mean_period_steps, CorrDimParams, RosensteinParams};
use crate::chaos::{System, TimeSeries};
use crate::error::{Error, Result};

const BUILTIN: &str = include_str!("../../presets/metrics.json");

/// Rosenstein settings in Lyapunov times of the reference exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RosensteinPreset {
    pub horizon_lyap: f64,
    pub fit_lyap: [f64; 2],
    pub max_references: usize,
    /// Fixed Theiler window in steps; `None` uses the dominant period of the series.
    #[serde(default)]
    pub theiler: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrDimPreset {
    pub n_radii: usize,
    pub radius_range: [f64; 2],
    pub fit_range: [f64; 2],
    pub sample_cap: usize,
}

/// Reference values and estimator settings for one system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricPreset {
    pub lambda_true: f64,
    pub lambda_std: f64,
    pub dim_true: f64,
    pub dim_std: f64,
    pub rosenstein: RosensteinPreset,
    pub corr_dim: CorrDimPreset,
}

impl MetricPreset {
    pub fn for_system(system: System) -> &'static MetricPreset {
        &presets()[&system]
    }

    /// Theiler window for `series`: the fixed value, or one dominant period.
    pub fn theiler(&self, series: &TimeSeries) -> Result<usize> {
        match self.rosenstein.theiler {
            Some(t) => Ok(t),
            None => mean_period_steps(series),
        }
    }

    pub fn rosenstein_params(&self, dt: f64, theiler: usize) -> RosensteinParams {
        let steps = |lyap: f64| (lyap / (self.lambda_true * dt)).round() as usize;
        let r = &self.rosenstein;
        RosensteinParams {
            theiler,
            horizon: steps(r.horizon_lyap),
            fit_start: steps(r.fit_lyap[0]),
            fit_end: steps(r.fit_lyap[1]),
            max_references: r.max_references,
        }
    }

    pub fn corr_dim_params(&self, theiler: usize) -> CorrDimParams {
        let c = &self.corr_dim;
        CorrDimParams {
            n_radii: c.n_radii,
            radius_lo: c.radius_range[0],
            radius_hi: c.radius_range[1],
            fit_lo: c.fit_range[0],
            fit_hi: c.fit_range[1],
            theiler,
            sample_cap: c.sample_cap,
        }
    }
}

fn parse(text: &str) -> Result<BTreeMap<System, MetricPreset>> {
    let map: BTreeMap<System, MetricPreset> = serde_json::from_str(text)?;
    if let Some(missing) = System::ALL.iter().find(|s| !map.contains_key(s)) {
        return Err(Error::InvalidArgument(format!("metric presets lack an entry for {missing}")));
    }
    Ok(map)
}

/// Built-in presets for all eight systems.
pub fn presets() -> &'static BTreeMap<System, MetricPreset> {
    static CELL: OnceLock<BTreeMap<System, MetricPreset>> = OnceLock::new();
    CELL.get_or_init(|| parse(BUILTIN).expect("built-in metric presets are valid"))
}

/// Read a full preset table from a JSON file.
pub fn load_presets(path: &Path) -> Result<BTreeMap<System, MetricPreset>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_covers_every_system() {
        assert_eq!(presets().len(), 8);
        let lorenz = MetricPreset::for_system(System::Lorenz63);
        assert_eq!(lorenz.lambda_true, 0.91);
        assert_eq!(lorenz.dim_true, 2.052);
    }

    #[test]
    fn step_conversion() {
        let p = MetricPreset::for_system(System::Lorenz63).rosenstein_params(0.02, 40);
        assert_eq!(p.theiler, 40);
        assert!(p.fit_start < p.fit_end && p.fit_end <= p.horizon);
    }
}
