//! Short-term and climate scores for forecasts.

mod dimension;
mod horizon;
mod lyapunov;
mod presets;
mod report;

pub use dimension::{correlation_dimension, correlation_sums, CorrDimParams};
pub use horizon::{forecast_horizon, normalized_errors, DEFAULT_E_MAX};
pub use lyapunov::{divergence_curve, mean_period_steps, rosenstein_lyapunov, RosensteinParams};
pub use presets::{load_presets, presets, CorrDimPreset, MetricPreset, RosensteinPreset};
pub use report::{climate, evaluate, EvaluationReport};

/// Least-squares slope of `y` against `x`.
pub(crate) fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (sxy, sxx) =
        x.iter().zip(y).fold((0.0, 0.0), |(sxy, sxx), (a, b)| (sxy + (a - mx) * (b - my), sxx + (a - mx) * (a - mx)));
    sxy / sxx
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
