//! Dense statevector simulation.
//!
//! Wire 0 is the most significant bit of a basis index: for `n` qubits the
//! basis state `|b_0 b_1 … b_{n-1}⟩` sits at index `Σ_w b_w · 2^(n-1-w)`.

mod entropy;
mod gate;
mod hermitian;
mod state;

pub use entropy::{entanglement_entropy, reduced_density, von_neumann_entropy, EIGEN_CLAMP};
pub use gate::{gates, GateMatrix, Mat2};
pub use hermitian::HermitianMatrix;
pub use state::StateVector;

pub use num_complex::Complex64 as C64;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 20;

/// Tolerance used for unitarity checks.
pub const UNITARY_TOL: f64 = 1e-10;

/// Tolerance used for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Half-register partition used for reported entropies: wires `0..⌈n/2⌉`.
pub fn default_partition(n_qubits: usize) -> Vec<usize> {
    (0..n_qubits.div_ceil(2)).collect()
}
