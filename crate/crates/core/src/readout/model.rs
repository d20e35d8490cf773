use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{build_features_into, feature_len, ridge_fit, ExperimentConfig};
use crate::chaos::{SeriesKind, TimeSeries};
use crate::error::{Error, Result};
use crate::preprocess::{fit_scaler, transform, Scaler};
use crate::reservoir::ReservoirBank;

/// Trained linear readout `o = W_out q` acting in scaled space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadoutModel {
    /// `d × dim(q)`, one row per output dimension.
    pub w_out: Vec<Vec<f64>>,
    pub beta: f64,
    pub degree: usize,
    pub dt: f64,
    pub scaler: Scaler,
    pub config: ExperimentConfig,
}

impl ReadoutModel {
    pub fn output_dim(&self) -> usize {
        self.w_out.len()
    }

    pub fn feature_len(&self) -> usize {
        self.w_out.first().map_or(0, Vec::len)
    }
}

/// A readout together with the reservoirs in their end-of-training state.
///
/// Reloading this and calling [`predict_closed_loop`] reproduces the original forecast bit for bit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainedModel {
    pub model: ReadoutModel,
    pub bank: ReservoirBank,
}

/// `W_out · q(p)` without clamping.
pub fn readout_output(model: &ReadoutModel, nodes: &[f64]) -> Result<Vec<f64>> {
    let mut q = Vec::new();
    readout_into(model, nodes, &mut q)
}

fn readout_into(model: &ReadoutModel, nodes: &[f64], q: &mut Vec<f64>) -> Result<Vec<f64>> {
    if feature_len(nodes.len(), model.degree) != model.feature_len() {
        return Err(Error::DimensionMismatch(format!(
            "{} nodes at G={} do not match a readout of width {}",
            nodes.len(),
            model.degree,
            model.feature_len()
        )));
    }
    build_features_into(nodes, model.degree, q);
    Ok(model.w_out.iter().map(|row| row.iter().zip(q.iter()).map(|(w, x)| w * x).sum()).collect())
}

/// Drive `bank` through the sync and training segments of `scaled`.
///
/// Returns `(Q, Y)`: columns `q(N_sync+1) … q(N_sync+N_train-1)` and the next-step
/// targets. On return the bank has also absorbed the last training point, so its
/// `last_nodes` feed the first forecast.
pub fn collect_training(
    bank: &mut ReservoirBank,
    scaled: &TimeSeries,
    n_sync: usize,
    n_train: usize,
    degree: usize,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let needed = n_sync + n_train;
    if scaled.len() < needed {
        return Err(Error::SeriesTooShort { required: needed, available: scaled.len() });
    }
    if n_train < 2 {
        return Err(Error::InvalidArgument("n_train must be at least 2".into()));
    }
    bank.reset();
    for k in 0..n_sync {
        bank.step(scaled.point(k))?;
    }
    let cols = n_train - 1;
    let rows = feature_len(bank.node_count(), degree);
    let d = scaled.dim();
    let mut q = DMatrix::zeros(rows, cols);
    let mut y = DMatrix::zeros(d, cols);
    let mut buf = Vec::with_capacity(rows);
    for c in 0..cols {
        let k = n_sync + c;
        let nodes = bank.step(scaled.point(k))?;
        build_features_into(nodes, degree, &mut buf);
        q.column_mut(c).copy_from_slice(&buf);
        y.column_mut(c).copy_from_slice(scaled.point(k + 1));
    }
    bank.step(scaled.point(needed - 1))?;
    Ok((q, y))
}

/// Fit scaler and readout on the first `N_sync + N_train` points of `series`.
pub fn train<R: Rng + ?Sized>(
    series: &TimeSeries,
    config: &ExperimentConfig,
    rng: &mut R,
) -> Result<(ReadoutModel, ReservoirBank)> {
    config.validate()?;
    let needed = config.n_sync + config.n_train;
    if series.len() < needed {
        return Err(Error::SeriesTooShort { required: needed, available: series.len() });
    }
    let segment = series.slice(0, needed)?;
    let scaler = fit_scaler(&segment, config.a, config.b)?;
    let scaled = transform(&scaler, &segment)?;
    let mut bank = ReservoirBank::sample(rng, config.ising(), config.r, series.dim(), config.dynamics)?;
    let (q, y) = collect_training(&mut bank, &scaled, config.n_sync, config.n_train, config.g)?;
    let w = ridge_fit(&q, &y, config.beta)?;
    let w_out = (0..w.nrows()).map(|i| w.row(i).iter().copied().collect()).collect();
    let model =
        ReadoutModel { w_out, beta: config.beta, degree: config.g, dt: series.dt(), scaler, config: config.clone() };
    Ok((model, bank))
}

/// Closed-loop forecast in raw units.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub series: TimeSeries,
    /// Step at which the readout produced a non-finite value; the series stops there.
    pub diverged: Option<usize>,
}

/// Feed each clamped output back as the next input for `n_pred` steps.
///
/// The bank must hold the end-of-training state from [`train`].
pub fn predict_closed_loop(model: &ReadoutModel, bank: &mut ReservoirBank, n_pred: usize) -> Result<Prediction> {
    let d = model.output_dim();
    let mut series = TimeSeries::empty(d, model.dt, SeriesKind::Predicted);
    if n_pred == 0 {
        return Ok(Prediction { series, diverged: None });
    }
    if bank.last_nodes().is_empty() {
        return Err(Error::InvalidArgument("bank has not been driven; train it first".into()));
    }
    let mut nodes = bank.last_nodes().to_vec();
    let mut q = Vec::new();
    for step in 0..n_pred {
        let mut o = readout_into(model, &nodes, &mut q)?;
        if o.iter().any(|x| !x.is_finite()) {
            return Ok(Prediction { series, diverged: Some(step) });
        }
        for x in &mut o {
            *x = x.clamp(0.0, 1.0);
        }
        series.push(&model.scaler.inverse_point(&o));
        nodes.clear();
        nodes.extend_from_slice(bank.step(&o)?);
    }
    Ok(Prediction { series, diverged: None })
}
