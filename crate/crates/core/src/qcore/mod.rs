//! Dense complex linear algebra and qubit primitives.
//!
//! Conventions: `|0> = (1, 0)^T`, `sigma_z = diag(+1, -1)`, and qubit 1 is the
//! leftmost tensor factor (most significant bit of a basis index).

mod density;
mod eigen;
mod matrix;
mod ops;

pub use density::DensityMatrix;
pub use eigen::{hermitian_eig, unitary_from_hamiltonian, HermitianEig};
pub use matrix::ComplexMatrix;
pub use ops::{embed_single, expectation, kron, partial_trace, pauli_x, pauli_y, pauli_z};

pub use num_complex::Complex64 as C64;
