use serde::{Deserialize, Serialize};

use super::{correlation_dimension, forecast_horizon, rosenstein_lyapunov, MetricPreset, DEFAULT_E_MAX};
use crate::chaos::TimeSeries;
use crate::error::Result;
use crate::exec::Execution;
use crate::readout::Prediction;

/// Scores of one realization. Climate metrics are absent for diverged or
/// truncated forecasts and whenever the estimator rejects the series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub realization: usize,
    pub seed: u64,
    pub forecast_horizon: f64,
    pub lambda_max: Option<f64>,
    pub corr_dim: Option<f64>,
    pub diverged: bool,
}

/// Largest Lyapunov exponent and correlation dimension of `series`, if computable.
pub fn climate(series: &TimeSeries, preset: &MetricPreset, exec: Execution) -> (Option<f64>, Option<f64>) {
    let Ok(theiler) = preset.theiler(series) else {
        return (None, None);
    };
    let lambda = rosenstein_lyapunov(series, &preset.rosenstein_params(series.dt(), theiler), exec).ok();
    let dim = correlation_dimension(series, &preset.corr_dim_params(theiler), exec).ok();
    (lambda, dim)
}

/// Score `pred` against `truth`. Only the horizon can fail hard.
pub fn evaluate(
    pred: &Prediction,
    truth: &TimeSeries,
    preset: &MetricPreset,
    e_max: Option<f64>,
    exec: Execution,
) -> Result<EvaluationReport> {
    let horizon = forecast_horizon(&pred.series, truth, e_max.unwrap_or(DEFAULT_E_MAX), preset.lambda_true)?;
    let diverged = pred.diverged.is_some();
    let (lambda_max, corr_dim) =
        if diverged || pred.series.len() < truth.len() { (None, None) } else { climate(&pred.series, preset, exec) };
    Ok(EvaluationReport { realization: 0, seed: 0, forecast_horizon: horizon, lambda_max, corr_dim, diverged })
}
