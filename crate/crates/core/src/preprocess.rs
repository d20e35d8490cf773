//! Standardize, then min-max rescale onto `[a, b]`.
//!
//! The rescaling reference is the standardized training segment, so every
//! training point lands in `[a, b]`. Out-of-envelope values (closed-loop
//! excursions) are clamped to `[0, 1]`, the range the amplitude encoding accepts.

use serde::{Deserialize, Serialize};

use crate::chaos::{SeriesKind, TimeSeries};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
    pub a: f64,
    pub b: f64,
}

pub fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(0.0 <= a && a < b && b <= 1.0) {
        return Err(Error::InvalidArgument(format!("need 0 <= a < b <= 1, got [{a}, {b}]")));
    }
    Ok(())
}

/// Per-dimension population statistics of `train`, then the standardized envelope.
pub fn fit_scaler(train: &TimeSeries, a: f64, b: f64) -> Result<Scaler> {
    check_interval(a, b)?;
    let n = train.len();
    if n < 2 {
        return Err(Error::SeriesTooShort { required: 2, available: n });
    }
    let dim = train.dim();
    let mut means = vec![0.0; dim];
    let mut stds = vec![0.0; dim];
    let mut mins = vec![0.0; dim];
    let mut maxs = vec![0.0; dim];
    for d in 0..dim {
        let col = train.component(d);
        let mean = col.iter().sum::<f64>() / n as f64;
        let var = col.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        let std = var.sqrt();
        if !(std > 0.0) {
            return Err(Error::ConstantDimension { dim: d });
        }
        let (lo, hi) = col.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            let z = (x - mean) / std;
            (lo.min(z), hi.max(z))
        });
        if !(lo < hi) {
            return Err(Error::ConstantDimension { dim: d });
        }
        means[d] = mean;
        stds[d] = std;
        mins[d] = lo;
        maxs[d] = hi;
    }
    Ok(Scaler { means, stds, mins, maxs, a, b })
}

impl Scaler {
    pub fn dim(&self) -> usize {
        self.means.len()
    }

    /// Forward map before clamping.
    pub fn forward_unclamped(&self, d: usize, x: f64) -> f64 {
        let z = (x - self.means[d]) / self.stds[d];
        self.a + (self.b - self.a) * (z - self.mins[d]) / (self.maxs[d] - self.mins[d])
    }

    pub fn forward(&self, d: usize, x: f64) -> f64 {
        self.forward_unclamped(d, x).clamp(0.0, 1.0)
    }

    pub fn inverse(&self, d: usize, y: f64) -> f64 {
        let z = self.mins[d] + (y - self.a) * (self.maxs[d] - self.mins[d]) / (self.b - self.a);
        z * self.stds[d] + self.means[d]
    }

    pub fn transform_point(&self, p: &[f64]) -> Vec<f64> {
        p.iter().enumerate().map(|(d, &x)| self.forward(d, x)).collect()
    }

    pub fn inverse_point(&self, p: &[f64]) -> Vec<f64> {
        p.iter().enumerate().map(|(d, &y)| self.inverse(d, y)).collect()
    }

    fn check_dim(&self, series: &TimeSeries) -> Result<()> {
        if series.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "scaler has {} dimensions, series has {}",
                self.dim(),
                series.dim()
            )));
        }
        Ok(())
    }
}

pub fn transform(s: &Scaler, series: &TimeSeries) -> Result<TimeSeries> {
    s.check_dim(series)?;
    let data = series.points().flat_map(|p| s.transform_point(p)).collect();
    TimeSeries::from_flat(series.dim(), series.dt(), data, SeriesKind::Scaled)
}

/// Algebraic inverse of the unclamped forward map. Keeps the input's kind
/// unless it was `Scaled`, which becomes `Raw`.
pub fn inverse_transform(s: &Scaler, series: &TimeSeries) -> Result<TimeSeries> {
    s.check_dim(series)?;
    let data = series.points().flat_map(|p| s.inverse_point(p)).collect();
    let kind = match series.kind {
        SeriesKind::Scaled => SeriesKind::Raw,
        k => k,
    };
    TimeSeries::from_flat(series.dim(), series.dt(), data, kind)
}
