//! Quantum reservoir computing for three-dimensional chaotic flows.
//!
//! A bank of small transverse-field Ising reservoirs (four qubits by default) is
//! driven by a standardized, rescaled input signal. Spin projections and
//! spin-spin correlations are read out after every sub-evolution, expanded into
//! a polynomial feature vector and mapped to the next input by a ridge-regressed
//! linear readout. The trained model is then run autonomously in closed loop and
//! scored with a forecast horizon, the largest Lyapunov exponent (Rosenstein) and
//! the correlation dimension (Grassberger-Procaccia).
//!
//! Module map:
//!
//! * [`qcore`]: dense complex matrices, Pauli embeddings, partial trace,
//!   Hermitian eigendecomposition and matrix exponentials.
//! * [`chaos`]: the eight benchmark flows, RK4 integration, dataset slicing.
//! * [`preprocess`]: standardize-then-rescale transform and its inverse.
//! * [`reservoir`]: random Ising Hamiltonians, input injection, multiplexed
//!   measurement, Lindblad dephasing.
//! * [`readout`]: polynomial features, ridge regression, training and
//!   closed-loop prediction.
//! * [`metrics`]: forecast horizon, Lyapunov exponent, correlation dimension.
//! * [`harness`]: experiment manifests, sweeps, CSV/SVG reports.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chaos;
pub mod error;
pub mod exec;
pub mod harness;
pub mod io;
pub mod metrics;
pub mod preprocess;
pub mod qcore;
pub mod readout;
pub mod reservoir;
pub mod seed;

pub use error::{Error, Result};
pub use exec::Execution;
