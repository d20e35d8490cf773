use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{sample_hamiltonian, HamiltonianSpec, IsingParams, LindbladPropagator, Observables, DEFAULT_SUBSTEPS};
use crate::error::{Error, Result};
use crate::qcore::{kron, partial_trace, ComplexMatrix, DensityMatrix};

/// How a reservoir propagates between measurements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Dynamics {
    #[default]
    Unitary,
    /// Lindblad dephasing at rate `gamma` on every qubit.
    Dephasing { gamma: f64, substeps: usize },
}

impl Dynamics {
    pub fn dephasing(gamma: f64) -> Self {
        Dynamics::Dephasing { gamma, substeps: DEFAULT_SUBSTEPS }
    }
}

/// `ρ_{u1} ⊗ … ⊗ ρ_{ud} ⊗ Tr_{1..d}(state)`: overwrite the first `d` qubits with the input.
pub fn inject_input(state: &DensityMatrix, u: &[f64]) -> Result<DensityMatrix> {
    let n = state.n_qubits();
    let d = u.len();
    if d == 0 || d >= n {
        return Err(Error::InvalidArgument(format!(
            "{d}-dimensional input needs more than {d} qubits, reservoir has {n}"
        )));
    }
    if let Some(&bad) = u.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::InputOutOfRange { value: bad });
    }
    let sites: Vec<usize> = (1..=d).collect();
    let memory = partial_trace(state, &sites)?;
    let mut encoded = ComplexMatrix::identity(1);
    for &ui in u {
        encoded = kron(&encoded, DensityMatrix::encoding_state(ui)?.matrix());
    }
    Ok(DensityMatrix::from_matrix_unchecked(kron(&encoded, memory.matrix())))
}

/// `(U ρ U^dagger, observables on the evolved state)`.
pub fn evolve_measure(
    state: &DensityMatrix,
    unitary: &ComplexMatrix,
    observables: &Observables,
) -> Result<(DensityMatrix, Vec<f64>)> {
    let evolved = DensityMatrix::from_matrix_unchecked(state.matrix().conjugate_by(unitary)?);
    let nodes = observables.measure(&evolved);
    Ok((evolved, nodes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reservoir {
    pub hamiltonian: HamiltonianSpec,
    pub state: DensityMatrix,
}

#[derive(Serialize, Deserialize)]
struct BankRepr {
    reservoirs: Vec<Reservoir>,
    input_dim: usize,
    dynamics: Dynamics,
    last_nodes: Vec<f64>,
}

/// `r` independent reservoirs driven by the same input.
///
/// Each call to [`ReservoirBank::step`] injects the input once per reservoir and
/// then performs `V` evolve-then-measure rounds of length `tau / V`, producing
/// `r · V · n_obs` node values in reservoir-major, round-minor order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "BankRepr", into = "BankRepr")]
pub struct ReservoirBank {
    reservoirs: Vec<Reservoir>,
    input_dim: usize,
    dynamics: Dynamics,
    observables: Observables,
    propagators: Vec<Option<LindbladPropagator>>,
    last_nodes: Vec<f64>,
}

impl ReservoirBank {
    pub fn new(hamiltonians: Vec<HamiltonianSpec>, input_dim: usize, dynamics: Dynamics) -> Result<Self> {
        let reservoirs = hamiltonians
            .into_iter()
            .map(|h| {
                let n = h.params().n_qubits;
                Reservoir { hamiltonian: h, state: DensityMatrix::ground(n) }
            })
            .collect();
        Self::from_reservoirs(reservoirs, input_dim, dynamics, Vec::new())
    }

    fn from_reservoirs(
        reservoirs: Vec<Reservoir>,
        input_dim: usize,
        dynamics: Dynamics,
        last_nodes: Vec<f64>,
    ) -> Result<Self> {
        let first =
            reservoirs.first().ok_or_else(|| Error::InvalidArgument("bank needs at least one reservoir".into()))?;
        let params = *first.hamiltonian.params();
        for r in &reservoirs {
            let p = r.hamiltonian.params();
            if p.n_qubits != params.n_qubits || p.multiplex != params.multiplex {
                return Err(Error::InvalidArgument("reservoirs must share qubit count and V".into()));
            }
            if r.state.n_qubits() != p.n_qubits {
                return Err(Error::DimensionMismatch("reservoir state size".into()));
            }
        }
        if input_dim == 0 || input_dim >= params.n_qubits {
            return Err(Error::InvalidArgument(format!(
                "input dimension {input_dim} needs fewer than {} qubits",
                params.n_qubits
            )));
        }
        let propagators = match dynamics {
            Dynamics::Unitary => vec![None; reservoirs.len()],
            Dynamics::Dephasing { gamma, substeps } => reservoirs
                .iter()
                .map(|r| {
                    let t = r.hamiltonian.params().substep_time();
                    LindbladPropagator::new(r.hamiltonian.matrix(), gamma, t, substeps).map(Some)
                })
                .collect::<Result<_>>()?,
        };
        let observables = Observables::spin_set(params.n_qubits);
        let bank = Self { reservoirs, input_dim, dynamics, observables, propagators, last_nodes };
        if !bank.last_nodes.is_empty() && bank.last_nodes.len() != bank.node_count() {
            return Err(Error::DimensionMismatch("stored node vector length".into()));
        }
        Ok(bank)
    }

    /// Draw `r` reservoirs from `rng` in sequence.
    pub fn sample<R: Rng + ?Sized>(
        rng: &mut R,
        params: IsingParams,
        r: usize,
        input_dim: usize,
        dynamics: Dynamics,
    ) -> Result<Self> {
        let hs = (0..r).map(|_| sample_hamiltonian(rng, params)).collect::<Result<_>>()?;
        Self::new(hs, input_dim, dynamics)
    }

    pub fn reservoirs(&self) -> &[Reservoir] {
        &self.reservoirs
    }

    pub fn dynamics(&self) -> Dynamics {
        self.dynamics
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn observables(&self) -> &Observables {
        &self.observables
    }

    pub fn multiplex(&self) -> usize {
        self.reservoirs[0].hamiltonian.params().multiplex
    }

    /// Length of `p(k)`: `n_obs · V · r`.
    pub fn node_count(&self) -> usize {
        self.observables.len() * self.multiplex() * self.reservoirs.len()
    }

    /// Node vector from the most recent step; empty right after construction or reset.
    pub fn last_nodes(&self) -> &[f64] {
        &self.last_nodes
    }

    /// Every reservoir back to `(|0><0|)^{⊗N}`.
    pub fn reset(&mut self) {
        for r in &mut self.reservoirs {
            r.state = DensityMatrix::ground(r.hamiltonian.params().n_qubits);
        }
        self.last_nodes.clear();
    }

    pub fn set_states(&mut self, states: Vec<DensityMatrix>) -> Result<()> {
        if states.len() != self.reservoirs.len() {
            return Err(Error::DimensionMismatch("one state per reservoir".into()));
        }
        for (r, s) in self.reservoirs.iter_mut().zip(states) {
            if s.dim() != r.state.dim() {
                return Err(Error::DimensionMismatch("state size".into()));
            }
            r.state = s;
        }
        Ok(())
    }

    /// Drive every reservoir with `u` and return `p(k)`.
    pub fn step(&mut self, u: &[f64]) -> Result<&[f64]> {
        if u.len() != self.input_dim {
            return Err(Error::DimensionMismatch(format!(
                "bank expects {}-dimensional input, got {}",
                self.input_dim,
                u.len()
            )));
        }
        let v = self.multiplex();
        let mut nodes = Vec::with_capacity(self.node_count());
        for (res, prop) in self.reservoirs.iter_mut().zip(&self.propagators) {
            let mut rho = inject_input(&res.state, u)?;
            for _ in 0..v {
                rho = match prop {
                    None => DensityMatrix::from_matrix_unchecked(
                        rho.matrix().conjugate_by(res.hamiltonian.substep_unitary())?,
                    ),
                    Some(p) => p.apply(&rho),
                };
                self.observables.measure_into(&rho, &mut nodes);
            }
            res.state = rho;
        }
        self.last_nodes = nodes;
        Ok(&self.last_nodes)
    }
}

impl TryFrom<BankRepr> for ReservoirBank {
    type Error = Error;

    fn try_from(r: BankRepr) -> Result<Self> {
        Self::from_reservoirs(r.reservoirs, r.input_dim, r.dynamics, r.last_nodes)
    }
}

impl From<ReservoirBank> for BankRepr {
    fn from(b: ReservoirBank) -> Self {
        BankRepr { reservoirs: b.reservoirs, input_dim: b.input_dim, dynamics: b.dynamics, last_nodes: b.last_nodes }
    }
}
