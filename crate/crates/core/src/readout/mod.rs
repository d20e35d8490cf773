//! Polynomial readout, ridge training and closed-loop forecasting.

mod config;
mod model;
mod ridge;

pub use config::{legal_intervals, ExperimentConfig};
pub use model::{collect_training, predict_closed_loop, readout_output, train, Prediction, ReadoutModel, TrainedModel};
pub use ridge::{ridge_fit, RIDGE_RESIDUAL_TOL};

/// `[1, p, p∘2, …, p∘G]`.
pub fn build_features(p: &[f64], degree: usize) -> Vec<f64> {
    let mut q = Vec::with_capacity(feature_len(p.len(), degree));
    build_features_into(p, degree, &mut q);
    q
}

/// Like [`build_features`], reusing `out`'s allocation.
pub fn build_features_into(p: &[f64], degree: usize, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    out.extend_from_slice(p);
    for g in 2..=degree {
        let start = out.len() - p.len();
        for k in 0..p.len() {
            let prev = out[start + k];
            out.push(prev * p[k]);
        }
        debug_assert_eq!(out.len(), 1 + g * p.len());
    }
}

/// `G · nodes + 1`.
pub fn feature_len(nodes: usize, degree: usize) -> usize {
    degree * nodes + 1
}

/// Feature length for `V` multiplexed rounds of the ten spin observables on `r` reservoirs.
pub fn feature_len_for(v: usize, r: usize, degree: usize) -> usize {
    feature_len(10 * v * r, degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_powers() {
        assert_eq!(build_features(&[0.5], 4), vec![1.0, 0.5, 0.25, 0.125, 0.0625]);
    }

    #[test]
    fn zero_vector_keeps_bias_only() {
        let q = build_features(&[0.0; 7], 3);
        assert_eq!(q.len(), 22);
        assert_eq!(q[0], 1.0);
        assert!(q[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn powers_are_blocked_by_degree() {
        let p = [0.3, -0.7];
        let q = build_features(&p, 3);
        assert_eq!(q.len(), 7);
        for (g, block) in q[1..].chunks(2).enumerate() {
            for (k, &x) in block.iter().enumerate() {
                assert!((x - p[k].powi(g as i32 + 1)).abs() < 1e-15);
            }
        }
    }
}
