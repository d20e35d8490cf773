use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{embed_single, kron, pauli_x, pauli_z, unitary_from_hamiltonian, ComplexMatrix, C64};

/// Physical scales of the Ising reservoir, all in units of the coupling `J`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsingParams {
    pub n_qubits: usize,
    /// Coupling scale `J`; `J_ij ~ U[-J/2, J/2]`.
    pub coupling: f64,
    /// Transverse field `h`.
    pub field: f64,
    /// Disorder bound `W`; `D_i ~ U[-W, W]`.
    pub disorder: f64,
    /// Time between two inputs.
    pub tau: f64,
    /// Evolve-and-measure repetitions per input (`V`).
    pub multiplex: usize,
}

impl Default for IsingParams {
    fn default() -> Self {
        Self { n_qubits: 4, coupling: 1.0, field: 2.0, disorder: 0.05, tau: 20.0, multiplex: 1 }
    }
}

impl IsingParams {
    pub fn with_multiplex(mut self, v: usize) -> Self {
        self.multiplex = v;
        self
    }

    /// Sub-evolution time `tau / V`.
    pub fn substep_time(&self) -> f64 {
        self.tau / self.multiplex as f64
    }

    pub fn n_pairs(&self) -> usize {
        self.n_qubits * (self.n_qubits.saturating_sub(1)) / 2
    }

    fn validate(&self) -> Result<()> {
        if self.multiplex == 0 {
            return Err(Error::InvalidArgument("V must be at least 1".into()));
        }
        if self.n_qubits == 0 || self.n_qubits > 10 {
            return Err(Error::InvalidArgument(format!("unsupported qubit count {}", self.n_qubits)));
        }
        if !(self.tau.is_finite() && self.coupling >= 0.0 && self.disorder >= 0.0) {
            return Err(Error::InvalidArgument("non-physical Ising scales".into()));
        }
        Ok(())
    }
}

/// Site pairs `(i, j)` with `i > j`, ordered by `j` then `i` (1-based).
pub fn coupling_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|j| ((j + 1)..=n).map(move |i| (i, j))).collect()
}

#[derive(Serialize, Deserialize)]
struct HamiltonianRepr {
    params: IsingParams,
    couplings: Vec<f64>,
    disorders: Vec<f64>,
}

/// A drawn reservoir: scalars plus the assembled `H` and `U = exp(-i H tau / V)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HamiltonianRepr", into = "HamiltonianRepr")]
pub struct HamiltonianSpec {
    params: IsingParams,
    couplings: Vec<f64>,
    disorders: Vec<f64>,
    matrix: ComplexMatrix,
    unitary: ComplexMatrix,
}

impl HamiltonianSpec {
    pub fn from_parts(params: IsingParams, couplings: Vec<f64>, disorders: Vec<f64>) -> Result<Self> {
        params.validate()?;
        let n = params.n_qubits;
        if couplings.len() != params.n_pairs() || disorders.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{n} qubits need {} couplings and {n} disorders, got {} and {}",
                params.n_pairs(),
                couplings.len(),
                disorders.len()
            )));
        }
        let matrix = assemble(&params, &couplings, &disorders)?;
        let unitary = unitary_from_hamiltonian(&matrix, params.substep_time())?;
        Ok(Self { params, couplings, disorders, matrix, unitary })
    }

    pub fn params(&self) -> &IsingParams {
        &self.params
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn disorders(&self) -> &[f64] {
        &self.disorders
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Propagator over one sub-evolution `tau / V`.
    pub fn substep_unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    /// Same couplings and disorders, different `V`.
    pub fn with_multiplex(&self, v: usize) -> Result<Self> {
        Self::from_parts(self.params.with_multiplex(v), self.couplings.clone(), self.disorders.clone())
    }
}

fn assemble(params: &IsingParams, couplings: &[f64], disorders: &[f64]) -> Result<ComplexMatrix> {
    let n = params.n_qubits;
    let dim = 1 << n;
    let mut h = ComplexMatrix::zeros(dim, dim);
    let xs: Vec<ComplexMatrix> = (1..=n).map(|i| embed_single(&pauli_x(), i, n)).collect::<Result<_>>()?;
    for (&(i, j), &jij) in coupling_pairs(n).iter().zip(couplings) {
        let xx = &xs[i - 1] * &xs[j - 1];
        h = &h + &xx.scale(C64::new(jij, 0.0));
    }
    for (i, &d) in disorders.iter().enumerate() {
        let z = embed_single(&pauli_z(), i + 1, n)?;
        h = &h + &z.scale(C64::new(0.5 * (params.field + d), 0.0));
    }
    debug_assert_eq!(kron(&ComplexMatrix::identity(1), &h), h);
    Ok(h)
}

/// Draw `J_ij ~ U[-J/2, J/2]` (all pairs first) then `D_i ~ U[-W, W]`.
pub fn sample_hamiltonian<R: Rng + ?Sized>(rng: &mut R, params: IsingParams) -> Result<HamiltonianSpec> {
    params.validate()?;
    let half = 0.5 * params.coupling;
    let couplings = (0..params.n_pairs()).map(|_| rng.random_range(-half..=half)).collect();
    let w = params.disorder;
    let disorders = (0..params.n_qubits).map(|_| rng.random_range(-w..=w)).collect();
    HamiltonianSpec::from_parts(params, couplings, disorders)
}

impl TryFrom<HamiltonianRepr> for HamiltonianSpec {
    type Error = Error;

    fn try_from(r: HamiltonianRepr) -> Result<Self> {
        Self::from_parts(r.params, r.couplings, r.disorders)
    }
}

impl From<HamiltonianSpec> for HamiltonianRepr {
    fn from(h: HamiltonianSpec) -> Self {
        HamiltonianRepr { params: h.params, couplings: h.couplings, disorders: h.disorders }
    }
}
