use std::f64::consts::TAU;

use ndarray::{Array3, ArrayView1};
use rand::Rng;

use crate::error::{Error, Result};
use crate::qsim::{gates, GateMatrix, StateVector};

/// Rotation angles of a strongly-entangling ansatz, shape `(layers, wires, 3)`.
/// The three angles of each wire are `(φ, θ, ω)` of `RZ(ω)·RY(θ)·RZ(φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzParams(Array3<f64>);

impl AnsatzParams {
    pub fn zeros(layers: usize, wires: usize) -> Self {
        AnsatzParams(Array3::zeros((layers, wires, 3)))
    }

    pub fn from_array(a: Array3<f64>) -> Result<Self> {
        if a.dim().2 != 3 {
            return Err(Error::Shape(format!("ansatz params need 3 angles per wire, got {:?}", a.dim())));
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::Validation("ansatz params contain non-finite angles".into()));
        }
        Ok(AnsatzParams(a))
    }

    /// Angles drawn uniformly from `[0, 2π)`.
    pub fn random_uniform<R: Rng>(layers: usize, wires: usize, rng: &mut R) -> Self {
        AnsatzParams(Array3::from_shape_simple_fn((layers, wires, 3), || rng.random::<f64>() * TAU))
    }

    pub fn layers(&self) -> usize {
        self.0.dim().0
    }

    pub fn wires(&self) -> usize {
        self.0.dim().1
    }

    pub fn as_array(&self) -> &Array3<f64> {
        &self.0
    }

    pub fn as_array_mut(&mut self) -> &mut Array3<f64> {
        &mut self.0
    }

    pub fn into_array(self) -> Array3<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// CNOT ring offset of layer `layer` on `n` wires: `(layer mod (n−1)) + 1`;
/// zero (no ring) for a single wire.
pub fn ring_range(layer: usize, n: usize) -> usize {
    if n < 2 {
        0
    } else {
        (layer % (n - 1)) + 1
    }
}

/// Fixed part of the classifier circuit.
#[derive(Debug, Clone)]
pub struct CircuitConfig {
    n_qubits: usize,
    n_layers: usize,
    embed_unitary: GateMatrix,
    embed_is_identity: bool,
    measure_wire: usize,
}

impl CircuitConfig {
    /// `embed_unitary` acts on the leading `log2(dim)` wires; pass a
    /// `2^n_qubits`-dimensional unitary to act on the whole register.
    pub fn new(n_qubits: usize, n_layers: usize, embed_unitary: GateMatrix, measure_wire: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > crate::qsim::MAX_QUBITS {
            return Err(Error::Capacity(format!("{n_qubits} qubits")));
        }
        if embed_unitary.n_qubits() > n_qubits {
            return Err(Error::Shape(format!(
                "embedding unitary spans {} qubits but the circuit has {n_qubits}",
                embed_unitary.n_qubits()
            )));
        }
        if measure_wire >= n_qubits {
            return Err(Error::Index(format!("measure wire {measure_wire} ≥ {n_qubits}")));
        }
        let embed_is_identity = *embed_unitary.entries() == ndarray::Array2::eye(embed_unitary.dim());
        Ok(CircuitConfig {
            n_qubits,
            n_layers,
            embed_unitary,
            embed_is_identity,
            measure_wire,
        })
    }

    /// Identity embedding, measured on wire 0.
    pub fn without_embedding(n_qubits: usize, n_layers: usize) -> Result<Self> {
        Self::new(n_qubits, n_layers, GateMatrix::identity(0), 0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_layers(&self) -> usize {
        self.n_layers
    }

    pub fn measure_wire(&self) -> usize {
        self.measure_wire
    }

    pub fn embed_unitary(&self) -> &GateMatrix {
        &self.embed_unitary
    }

    pub fn check_params(&self, params: &AnsatzParams) -> Result<()> {
        if params.layers() != self.n_layers || params.wires() != self.n_qubits {
            return Err(Error::Shape(format!(
                "params shape ({}, {}, 3) for a {}-layer {}-qubit circuit",
                params.layers(),
                params.wires(),
                self.n_layers,
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// State after the parameter-free prefix: angle embedding then the
    /// embedding unitary. The embedded state is a product, so the unitary
    /// only has to touch the factor on its own wires.
    pub fn prepare(&self, x: ArrayView1<f64>) -> Result<StateVector> {
        let features: Vec<f64> = x.iter().copied().collect();
        if features.len() != self.n_qubits {
            return Err(Error::Shape(format!("{} features for {} qubits", features.len(), self.n_qubits)));
        }
        let m = self.embed_unitary.n_qubits();
        if self.embed_is_identity {
            let mut state = StateVector::zero(self.n_qubits)?;
            state.angle_embed(&features)?;
            return Ok(state);
        }
        let mut lead = StateVector::zero(m)?;
        lead.angle_embed(&features[..m])?;
        lead.apply_full_unitary(&self.embed_unitary)?;
        if m == self.n_qubits {
            return Ok(lead);
        }
        let mut tail = StateVector::zero(self.n_qubits - m)?;
        tail.angle_embed(&features[m..])?;
        Ok(lead.kron(&tail))
    }

    /// One ansatz layer: `Rot` on every wire, then the CNOT ring.
    pub(crate) fn apply_layer(&self, state: &mut StateVector, params: &AnsatzParams, layer: usize) {
        let a = params.as_array();
        for w in 0..self.n_qubits {
            let m = gates::rot(a[[layer, w, 0]], a[[layer, w, 1]], a[[layer, w, 2]]);
            state.apply_mat2(&m, w);
        }
        self.apply_ring(state, layer);
    }

    pub(crate) fn apply_ring(&self, state: &mut StateVector, layer: usize) {
        let n = self.n_qubits;
        let r = ring_range(layer, n);
        if r == 0 {
            return;
        }
        for w in 0..n {
            state.cnot_unchecked(w, (w + r) % n);
        }
    }

    pub(crate) fn run_layers(&self, state: &mut StateVector, params: &AnsatzParams, from: usize) {
        for layer in from..self.n_layers {
            self.apply_layer(state, params, layer);
        }
    }

    /// Logit for a prepared state: `⟨Z⟩` on the measure wire after the ansatz.
    pub fn forward_prepared(&self, prepared: &StateVector, params: &AnsatzParams) -> Result<f64> {
        self.check_params(params)?;
        Ok(self.final_state_unchecked(prepared, params).expectation_z_unchecked(self.measure_wire))
    }

    pub(crate) fn final_state_unchecked(&self, prepared: &StateVector, params: &AnsatzParams) -> StateVector {
        let mut state = prepared.clone();
        self.run_layers(&mut state, params, 0);
        state
    }

    /// Full circuit state for input `x`.
    pub fn final_state(&self, x: ArrayView1<f64>, params: &AnsatzParams) -> Result<StateVector> {
        self.check_params(params)?;
        let prepared = self.prepare(x)?;
        Ok(self.final_state_unchecked(&prepared, params))
    }

    /// Classifier logit in `[−1, 1]` for input `x`.
    pub fn forward(&self, x: ArrayView1<f64>, params: &AnsatzParams) -> Result<f64> {
        self.check_params(params)?;
        let prepared = self.prepare(x)?;
        self.forward_prepared(&prepared, params)
    }
}
