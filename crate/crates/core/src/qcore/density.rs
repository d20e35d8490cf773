use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{hermitian_eig, ComplexMatrix};
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_FLOOR: f64 = -1e-9;

/// Observed deviations of a state from the density-matrix invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    pub hermiticity_error: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl StateDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.hermiticity_error <= HERMITIAN_TOL && self.trace_error <= TRACE_TOL && self.min_eigenvalue >= PSD_FLOOR
    }
}

/// Hermitian, unit-trace, positive-semidefinite `2^N x 2^N` operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validating constructor.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::checked_shape(matrix)?;
        let diag = rho.diagnostics();
        if !diag.is_valid() {
            return Err(Error::InvalidDensityMatrix(format!(
                "hermiticity {:e}, trace error {:e}, min eigenvalue {:e}",
                diag.hermiticity_error, diag.trace_error, diag.min_eigenvalue
            )));
        }
        Ok(rho)
    }

    fn checked_shape(matrix: ComplexMatrix) -> Result<Self> {
        let dim = matrix.rows();
        if !matrix.is_square() || dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidDensityMatrix(format!(
                "shape {}x{} is not 2^N square",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { n_qubits: dim.trailing_zeros() as usize, matrix })
    }

    /// Skips the invariant checks; shape must still be `2^N` square.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self::checked_shape(matrix).expect("density matrix shape")
    }

    /// `(|0><0|)^{⊗N}`.
    pub fn ground(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        Self { n_qubits, matrix: m }
    }

    /// `|psi><psi|` for a normalized state vector.
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("state norm^2 {norm} != 1")));
        }
        let m = ComplexMatrix::from_fn(psi.len(), psi.len(), |i, j| psi[i] * psi[j].conj());
        Self::checked_shape(m)
    }

    /// Single-qubit `|u><u|` with `|u> = sqrt(1-u)|0> + sqrt(u)|1>`.
    pub fn encoding_state(u: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::InputOutOfRange { value: u });
        }
        let (a, b) = ((1.0 - u).sqrt(), u.sqrt());
        let m = ComplexMatrix::from_vec(
            2,
            2,
            vec![
                Complex64::new(a * a, 0.0),
                Complex64::new(a * b, 0.0),
                Complex64::new(a * b, 0.0),
                Complex64::new(b * b, 0.0),
            ],
        )?;
        Ok(Self { n_qubits: 1, matrix: m })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn diagnostics(&self) -> StateDiagnostics {
        let hermiticity_error = self.matrix.hermiticity_error();
        let trace_error = (self.matrix.trace() - Complex64::new(1.0, 0.0)).norm();
        let mut sym = self.matrix.clone();
        sym.symmetrize();
        let min_eigenvalue =
            hermitian_eig(&sym).map(|e| e.values.first().copied().unwrap_or(0.0)).unwrap_or(f64::NEG_INFINITY);
        StateDiagnostics { hermiticity_error, trace_error, min_eigenvalue }
    }
}

impl TryFrom<ComplexMatrix> for DensityMatrix {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<DensityMatrix> for ComplexMatrix {
    fn from(d: DensityMatrix) -> Self {
        d.matrix
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_rejects_invariant_violations() {
        let not_unit = ComplexMatrix::from_real_diagonal(&[0.6, 0.6]);
        assert!(DensityMatrix::new(not_unit).is_err());
        let negative = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(DensityMatrix::new(negative).is_err());
        let mut skew = ComplexMatrix::from_real_diagonal(&[0.5, 0.5]);
        skew[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(DensityMatrix::new(skew).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::identity(3).scale(Complex64::new(1.0 / 3.0, 0.0))).is_err());
    }

    #[test]
    fn ground_and_encoding_states_are_valid() {
        assert!(DensityMatrix::ground(4).diagnostics().is_valid());
        assert!((DensityMatrix::ground(4).purity() - 1.0).abs() < 1e-15);
        assert!(DensityMatrix::encoding_state(0.3).unwrap().diagnostics().is_valid());
        assert!(DensityMatrix::encoding_state(1.2).is_err());
    }

    #[test]
    fn json_round_trip_validates() {
        let rho = DensityMatrix::encoding_state(0.25).unwrap();
        let s = serde_json::to_string(&rho).unwrap();
        let back: DensityMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(rho, back);
        let bad = serde_json::to_string(&ComplexMatrix::from_real_diagonal(&[2.0, 0.0])).unwrap();
        assert!(serde_json::from_str::<DensityMatrix>(&bad).is_err());
    }
}
