//! Transverse-field Ising reservoirs with temporal and spatial multiplexing.

mod bank;
mod hamiltonian;
mod lindblad;
mod observables;

pub use bank::{evolve_measure, inject_input, Dynamics, Reservoir, ReservoirBank};
pub use hamiltonian::{sample_hamiltonian, HamiltonianSpec, IsingParams};
pub use lindblad::{dephasing_rates, lindblad_evolve, LindbladPropagator, DEFAULT_SUBSTEPS};
pub use observables::Observables;
