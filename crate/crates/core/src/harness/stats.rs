use serde::{Deserialize, Serialize};

use crate::metrics::EvaluationReport;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation; zero for a single value.
    pub std: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Option<Stats> {
        if values.is_empty() {
            return None;
        }
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let std =
            if n > 1 { (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt() } else { 0.0 };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if n % 2 == 1 { sorted[n / 2] } else { 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]) };
        Some(Stats { count: n, mean, std, median, min: sorted[0], max: sorted[n - 1] })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n_realizations: usize,
    pub n_diverged: usize,
    pub n_failed: usize,
    pub forecast_horizon: Option<Stats>,
    pub lambda_max: Option<Stats>,
    pub corr_dim: Option<Stats>,
}

impl Summary {
    pub fn mean_horizon(&self) -> f64 {
        self.forecast_horizon.map_or(0.0, |s| s.mean)
    }
}

/// Horizon statistics cover every realization; climate statistics only those where the metric exists.
pub fn summarize(reports: &[EvaluationReport], n_failed: usize) -> Summary {
    let horizons: Vec<f64> = reports.iter().map(|r| r.forecast_horizon).collect();
    let lambdas: Vec<f64> = reports.iter().filter_map(|r| r.lambda_max).collect();
    let dims: Vec<f64> = reports.iter().filter_map(|r| r.corr_dim).collect();
    Summary {
        n_realizations: reports.len(),
        n_diverged: reports.iter().filter(|r| r.diverged).count(),
        n_failed,
        forecast_horizon: Stats::of(&horizons),
        lambda_max: Stats::of(&lambdas),
        corr_dim: Stats::of(&dims),
    }
}
