use serde::{Deserialize, Serialize};

use super::{summarize, RunManifest, Summary};
use crate::chaos::TimeSeries;
use crate::error::Result;
use crate::exec::Execution;
use crate::metrics::{evaluate, EvaluationReport, MetricPreset};
use crate::readout::{predict_closed_loop, train};
use crate::seed::rng_from_seed;

/// A realization that could not be trained or scored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub realization: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    /// One report per realization in index order. Failed realizations score a
    /// zero horizon, no climate metrics, and are flagged as diverged.
    pub reports: Vec<EvaluationReport>,
    pub failures: Vec<Failure>,
    pub summary: Summary,
}

/// Train, forecast and score realization `i` on its own data window.
pub fn run_realization(
    manifest: &RunManifest,
    preset: &MetricPreset,
    data: &TimeSeries,
    i: usize,
    metric_exec: Execution,
) -> Result<EvaluationReport> {
    let cfg = &manifest.config;
    let window = manifest.window(data, i)?;
    let seed = manifest.seeds[i];
    let (model, mut bank) = train(&window, cfg, &mut rng_from_seed(seed))?;
    let prediction = predict_closed_loop(&model, &mut bank, cfg.n_pred)?;
    let truth = window.slice(cfg.n_sync + cfg.n_train, cfg.n_pred)?;
    let mut report = evaluate(&prediction, &truth, preset, Some(manifest.e_max), metric_exec)?;
    report.realization = i;
    report.seed = seed;
    Ok(report)
}

/// All `N_stat` realizations. Per-realization errors are recorded, never fatal.
pub fn run_experiment(manifest: &RunManifest) -> Result<RunOutcome> {
    manifest.validate()?;
    let data = manifest.generate()?;
    run_on(manifest, &data)
}

pub(crate) fn run_on(manifest: &RunManifest, data: &TimeSeries) -> Result<RunOutcome> {
    let preset = manifest.preset();
    let exec = manifest.execution;
    // Realizations already saturate the pool; keep the metric loops serial underneath.
    let inner = if exec.is_parallel() { Execution::Sequential } else { exec };
    let results = exec.map_range(manifest.config.n_stat, |i| run_realization(manifest, &preset, data, i, inner));
    let mut reports = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(report) => reports.push(report),
            Err(e) => {
                failures.push(Failure { realization: i, message: e.to_string() });
                reports.push(EvaluationReport {
                    realization: i,
                    seed: manifest.seeds[i],
                    forecast_horizon: 0.0,
                    lambda_max: None,
                    corr_dim: None,
                    diverged: true,
                });
            }
        }
    }
    let summary = summarize(&reports, failures.len());
    Ok(RunOutcome { reports, failures, summary })
}
