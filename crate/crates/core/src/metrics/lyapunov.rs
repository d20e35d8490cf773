use rustfft::{num_complex::Complex, FftPlanner};

use super::{distance, ls_slope};
use crate::chaos::TimeSeries;
use crate::error::{Error, Result};
use crate::exec::Execution;

const MIN_PAIRS: usize = 10;

/// Knobs of the Rosenstein estimator, all in steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RosensteinParams {
    /// Neighbors must be more than this many steps apart in time.
    pub theiler: usize,
    /// Steps over which each neighbor pair is followed.
    pub horizon: usize,
    /// Inclusive step range of the linear fit.
    pub fit_start: usize,
    pub fit_end: usize,
    /// Upper bound on reference points, spread evenly over the series.
    pub max_references: usize,
}

/// Dominant period of the last component in steps, from the largest non-DC FFT bin.
pub fn mean_period_steps(series: &TimeSeries) -> Result<usize> {
    let n = series.len();
    if n < 4 {
        return Err(Error::SeriesTooShort { required: 4, available: n });
    }
    let signal = series.component(series.dim() - 1);
    let mean = signal.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex<f64>> = signal.iter().map(|&x| Complex::new(x - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let (peak, power) = buf[1..=n / 2]
        .iter()
        .enumerate()
        .map(|(k, c)| (k + 1, c.norm_sqr()))
        .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    if !(power > 0.0) {
        return Err(Error::Metric("flat spectrum, no dominant period".into()));
    }
    Ok((n as f64 / peak as f64).round() as usize)
}

/// `⟨ln d_j(i)⟩` for `i = 0..=horizon`, averaged over reference points `j`.
pub fn divergence_curve(series: &TimeSeries, params: &RosensteinParams, exec: Execution) -> Result<Vec<f64>> {
    let n = series.len();
    let required = 10 * params.horizon;
    if n < required || params.horizon == 0 {
        return Err(Error::SeriesTooShort { required: required.max(1), available: n });
    }
    let usable = n - params.horizon;
    let n_refs = usable.min(params.max_references.max(1));
    let refs: Vec<usize> = (0..n_refs).map(|k| k * usable / n_refs).collect();
    let theiler = params.theiler;
    let neighbors: Vec<Option<usize>> = exec.map_slice(&refs, |&j| {
        let xj = series.point(j);
        let mut best = (f64::INFINITY, None);
        for i in 0..usable {
            if i.abs_diff(j) <= theiler {
                continue;
            }
            let d = distance(xj, series.point(i));
            if d > 0.0 && d < best.0 {
                best = (d, Some(i));
            }
        }
        best.1
    });
    let pairs: Vec<(usize, usize)> = refs.iter().zip(&neighbors).filter_map(|(&j, nb)| nb.map(|i| (j, i))).collect();
    if pairs.len() < MIN_PAIRS {
        return Err(Error::Metric(format!("only {} neighbor pairs outside the Theiler window", pairs.len())));
    }
    let curve = (0..=params.horizon)
        .map(|step| {
            let (sum, count) = pairs.iter().fold((0.0, 0usize), |(s, c), &(j, i)| {
                let d = distance(series.point(j + step), series.point(i + step));
                if d > 0.0 {
                    (s + d.ln(), c + 1)
                } else {
                    (s, c)
                }
            });
            if count == 0 {
                f64::NAN
            } else {
                sum / count as f64
            }
        })
        .collect();
    Ok(curve)
}

/// Largest Lyapunov exponent: slope of the divergence curve over the fit range, per unit time.
pub fn rosenstein_lyapunov(series: &TimeSeries, params: &RosensteinParams, exec: Execution) -> Result<f64> {
    if !(params.fit_start < params.fit_end && params.fit_end <= params.horizon) {
        return Err(Error::InvalidArgument(format!(
            "fit range {}..={} must lie inside the horizon {}",
            params.fit_start, params.fit_end, params.horizon
        )));
    }
    let curve = divergence_curve(series, params, exec)?;
    let x: Vec<f64> = (params.fit_start..=params.fit_end).map(|i| i as f64 * series.dt()).collect();
    let y = &curve[params.fit_start..=params.fit_end];
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Metric("divergence curve undefined in the fit range".into()));
    }
    Ok(ls_slope(&x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::SeriesKind;

    // A circle in the tilted plane spanned by (1, 0, 1)/√2 and (0, 1, 0).
    fn circle(n: usize, period: f64) -> TimeSeries {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let data = (0..n)
            .flat_map(|k| {
                let w = std::f64::consts::TAU * k as f64 / period;
                [h * w.cos(), w.sin(), h * w.cos()]
            })
            .collect();
        TimeSeries::from_flat(3, 0.02, data, SeriesKind::Raw).unwrap()
    }

    #[test]
    fn period_of_pure_tone() {
        assert_eq!(mean_period_steps(&circle(4000, 50.0)).unwrap(), 50);
    }

    #[test]
    fn limit_cycle_has_no_divergence() {
        // Irrational period: no two samples coincide to rounding error.
        let s = circle(4000, 50.0 * 1.5f64.sqrt());
        let p = RosensteinParams { theiler: 62, horizon: 160, fit_start: 27, fit_end: 137, max_references: 500 };
        let lambda = rosenstein_lyapunov(&s, &p, Execution::Sequential).unwrap();
        assert!(lambda.abs() <= 0.01 * 0.91, "lambda {lambda}");
    }

    #[test]
    fn too_short_or_bad_fit_rejected() {
        let s = circle(100, 20.0);
        let p = RosensteinParams { theiler: 5, horizon: 50, fit_start: 1, fit_end: 10, max_references: 50 };
        assert!(matches!(rosenstein_lyapunov(&s, &p, Execution::Sequential), Err(Error::SeriesTooShort { .. })));
        let p = RosensteinParams { fit_start: 10, fit_end: 60, horizon: 5, ..p };
        assert!(rosenstein_lyapunov(&circle(1000, 20.0), &p, Execution::Sequential).is_err());
    }

    #[test]
    fn theiler_window_covering_everything_is_rejected() {
        let s = circle(1000, 20.0);
        let p = RosensteinParams { theiler: 5000, horizon: 50, fit_start: 1, fit_end: 10, max_references: 100 };
        assert!(matches!(rosenstein_lyapunov(&s, &p, Execution::Sequential), Err(Error::Metric(_))));
    }
}
