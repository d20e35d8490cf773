use super::distance;
use crate::chaos::TimeSeries;
use crate::error::{Error, Result};

/// Error threshold on the normalized forecast error.
pub const DEFAULT_E_MAX: f64 = 0.4;

/// `e(t) = ‖y(t) − ŷ(t)‖ / ⟨‖y‖²⟩^{1/2}`, the average running over all of `truth`.
///
/// `pred` may be shorter than `truth` (a truncated, diverged forecast); the
/// result then has `pred.len()` entries.
pub fn normalized_errors(pred: &TimeSeries, truth: &TimeSeries) -> Result<Vec<f64>> {
    if pred.dim() != truth.dim() {
        return Err(Error::DimensionMismatch(format!("prediction is {}-D, truth is {}-D", pred.dim(), truth.dim())));
    }
    if pred.len() > truth.len() {
        return Err(Error::DimensionMismatch(format!(
            "prediction has {} points but truth only {}",
            pred.len(),
            truth.len()
        )));
    }
    if !pred.is_empty() && (pred.dt() - truth.dt()).abs() > 1e-12 * truth.dt().abs() {
        return Err(Error::InvalidArgument(format!("dt mismatch: {} vs {}", pred.dt(), truth.dt())));
    }
    let mean_sq = truth.as_flat().iter().map(|x| x * x).sum::<f64>() / truth.len().max(1) as f64;
    if !(mean_sq > 0.0) {
        return Err(Error::Metric("truth has zero norm".into()));
    }
    let scale = mean_sq.sqrt();
    Ok(pred.points().zip(truth.points()).map(|(p, t)| distance(p, t) / scale).collect())
}

/// `Δt · s_v · λ_ref`, where `s_v` counts the leading steps with `e(t) < e_max`.
pub fn forecast_horizon(pred: &TimeSeries, truth: &TimeSeries, e_max: f64, lambda_ref: f64) -> Result<f64> {
    if !(lambda_ref > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda_ref must be > 0, got {lambda_ref}")));
    }
    let errors = normalized_errors(pred, truth)?;
    let valid = errors.iter().take_while(|&&e| e < e_max).count();
    Ok(truth.dt() * valid as f64 * lambda_ref)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::SeriesKind;

    fn series(points: &[[f64; 3]], dt: f64) -> TimeSeries {
        TimeSeries::from_flat(3, dt, points.concat(), SeriesKind::Raw).unwrap()
    }

    fn wiggle(n: usize) -> Vec<[f64; 3]> {
        (0..n)
            .map(|k| {
                let t = k as f64 * 0.1;
                [t.sin(), t.cos(), 1.0 + 0.5 * t.sin()]
            })
            .collect()
    }

    #[test]
    fn identical_series_scores_full_length() {
        let s = series(&wiggle(500), 0.02);
        let t = forecast_horizon(&s, &s, DEFAULT_E_MAX, 0.91).unwrap();
        assert!((t - 0.02 * 500.0 * 0.91).abs() < 1e-12);
    }

    #[test]
    fn immediate_miss_scores_zero() {
        let truth = series(&wiggle(50), 0.02);
        let pred = series(&vec![[10.0, 10.0, 10.0]; 50], 0.02);
        assert_eq!(forecast_horizon(&pred, &truth, DEFAULT_E_MAX, 0.91).unwrap(), 0.0);
    }

    #[test]
    fn lyapunov_time_conversion() {
        let t: f64 = 0.02 * 654.0 * 0.91;
        assert!((t - 11.9).abs() < 0.01);
    }

    #[test]
    fn zero_truth_rejected() {
        let zero = series(&vec![[0.0; 3]; 10], 0.1);
        assert!(forecast_horizon(&zero, &zero, 0.4, 1.0).is_err());
        let s = series(&wiggle(10), 0.1);
        assert!(forecast_horizon(&s, &s, 0.4, 0.0).is_err());
    }

    #[test]
    fn truncated_prediction_is_scored() {
        let pts = wiggle(100);
        let truth = series(&pts, 0.1);
        let pred = series(&pts[..30], 0.1);
        assert!((forecast_horizon(&pred, &truth, 0.4, 1.0).unwrap() - 3.0).abs() < 1e-12);
    }
}
