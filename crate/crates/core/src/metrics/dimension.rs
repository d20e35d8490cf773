use super::{distance, ls_slope};
use crate::chaos::TimeSeries;
use crate::error::{Error, Result};
use crate::exec::Execution;

const MIN_POINTS: usize = 1000;

/// Grassberger-Procaccia settings. Radii are fractions of the attractor diameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrDimParams {
    pub n_radii: usize,
    pub radius_lo: f64,
    pub radius_hi: f64,
    pub fit_lo: f64,
    pub fit_hi: f64,
    /// Minimum temporal separation of a counted pair, in original steps.
    pub theiler: usize,
    /// At most this many points (evenly strided) enter the pair count.
    pub sample_cap: usize,
}

impl CorrDimParams {
    fn radius_fractions(&self) -> Vec<f64> {
        let (lo, hi) = (self.radius_lo.ln(), self.radius_hi.ln());
        let n = self.n_radii.max(2);
        (0..n).map(|k| (lo + (hi - lo) * k as f64 / (n - 1) as f64).exp()).collect()
    }
}

/// Absolute radii and `C(r)`, the fraction of counted pairs closer than `r`.
pub fn correlation_sums(series: &TimeSeries, params: &CorrDimParams, exec: Execution) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = series.len();
    if n < MIN_POINTS {
        return Err(Error::SeriesTooShort { required: MIN_POINTS, available: n });
    }
    if !(0.0 < params.radius_lo && params.radius_lo < params.radius_hi) {
        return Err(Error::InvalidArgument("radius range must satisfy 0 < lo < hi".into()));
    }
    let stride = n.div_ceil(params.sample_cap.max(2));
    let idx: Vec<usize> = (0..n).step_by(stride).collect();
    let m = idx.len();
    let first_partner = |a: usize| (a + 1..m).find(|&b| (idx[b] - idx[a]) > params.theiler).unwrap_or(m);

    let diameter = exec
        .map_range(m, |a| {
            let pa = series.point(idx[a]);
            (a + 1..m).map(|b| distance(pa, series.point(idx[b]))).fold(0.0, f64::max)
        })
        .into_iter()
        .fold(0.0, f64::max);
    if !(diameter > 0.0) {
        return Err(Error::Metric("all sampled points coincide".into()));
    }
    let radii: Vec<f64> = params.radius_fractions().iter().map(|f| f * diameter).collect();

    let rows = exec.map_range(m, |a| {
        let pa = series.point(idx[a]);
        let mut hist = vec![0u64; radii.len() + 1];
        for &b in &idx[first_partner(a)..m] {
            let d = distance(pa, series.point(b));
            hist[radii.partition_point(|&r| r <= d)] += 1;
        }
        hist
    });
    let mut hist = vec![0u64; radii.len() + 1];
    for row in rows {
        for (h, c) in hist.iter_mut().zip(row) {
            *h += c;
        }
    }
    let total: u64 = hist.iter().sum();
    if total == 0 {
        return Err(Error::Metric("no pairs outside the Theiler window".into()));
    }
    let mut running = 0u64;
    let sums = hist[..radii.len()]
        .iter()
        .map(|&h| {
            running += h;
            running as f64 / total as f64
        })
        .collect();
    Ok((radii, sums))
}

/// Slope of `ln C(r)` against `ln r` over the fit window.
pub fn correlation_dimension(series: &TimeSeries, params: &CorrDimParams, exec: Execution) -> Result<f64> {
    let (radii, sums) = correlation_sums(series, params, exec)?;
    let fracs = params.radius_fractions();
    let window: Vec<usize> = (0..radii.len())
        .filter(|&k| fracs[k] >= params.fit_lo * (1.0 - 1e-9) && fracs[k] <= params.fit_hi * (1.0 + 1e-9))
        .collect();
    if window.len() < 2 {
        return Err(Error::InvalidArgument("fit window holds fewer than two radii".into()));
    }
    if window.iter().any(|&k| sums[k] <= 0.0) {
        return Err(Error::Metric("empty correlation sums inside the fit window".into()));
    }
    let x: Vec<f64> = window.iter().map(|&k| radii[k].ln()).collect();
    let y: Vec<f64> = window.iter().map(|&k| sums[k].ln()).collect();
    Ok(ls_slope(&x, &y))
}
