use ndarray::ArrayView2;

use super::gate::{gates, GateMatrix, Mat2};
use super::{C64, MAX_QUBITS};
use crate::error::{Error, Result};

/// Pure state of an `n`-qubit register as `2^n` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` wires.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "register of {n_qubits} qubits outside 1..={MAX_QUBITS}"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = C64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// Wraps raw amplitudes. The length must be a power of two and the norm 1
    /// within `1e-10`.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Shape(format!(
                "amplitude count {len} is not a power of two ≥ 2"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::Capacity(format!("{n_qubits} qubits exceeds {MAX_QUBITS}")));
        }
        let state = StateVector { n_qubits, amps };
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Validation(format!("state norm {norm} is not 1")));
        }
        Ok(state)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut s = Self::zero(n_qubits)?;
        if index >= s.amps.len() {
            return Err(Error::Index(format!("basis index {index} ≥ {}", s.amps.len())));
        }
        s.amps[0] = C64::new(0.0, 0.0);
        s.amps[index] = C64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn check_wire(&self, wire: usize) -> Result<()> {
        if wire >= self.n_qubits {
            return Err(Error::Index(format!(
                "wire {wire} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    #[inline]
    fn stride(&self, wire: usize) -> usize {
        1 << (self.n_qubits - 1 - wire)
    }

    /// Applies `I ⊗ … ⊗ gate ⊗ … ⊗ I` with `gate` on `wire`.
    pub fn apply_single_qubit_gate(&mut self, gate: &GateMatrix, wire: usize) -> Result<()> {
        let m = gate
            .as_mat2()
            .ok_or_else(|| Error::Shape(format!("expected a 2x2 gate, got dim {}", gate.dim())))?;
        self.check_wire(wire)?;
        self.apply_mat2(&m, wire);
        Ok(())
    }

    /// Unchecked single-qubit application; callers guarantee `wire` is in
    /// range and `m` is unitary.
    pub(crate) fn apply_mat2(&mut self, m: &Mat2, wire: usize) {
        let s = self.stride(wire);
        let [[m00, m01], [m10, m11]] = m.0;
        for block in self.amps.chunks_exact_mut(2 * s) {
            let (lo, hi) = block.split_at_mut(s);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = m00 * x + m01 * y;
                *b = m10 * x + m11 * y;
            }
        }
    }

    /// Flips `target` on every basis state whose `control` bit is 1.
    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_wire(control)?;
        self.check_wire(target)?;
        if control == target {
            return Err(Error::Validation(format!(
                "CNOT control and target are both wire {control}"
            )));
        }
        self.cnot_unchecked(control, target);
        Ok(())
    }

    pub(crate) fn cnot_unchecked(&mut self, control: usize, target: usize) {
        let cmask = self.stride(control);
        let tmask = self.stride(target);
        for i in 0..self.amps.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amps.swap(i, i | tmask);
            }
        }
    }

    /// Replaces the amplitudes by `unitary · amplitudes`; the unitary must
    /// span the whole register.
    pub fn apply_full_unitary(&mut self, unitary: &GateMatrix) -> Result<()> {
        if unitary.dim() != self.amps.len() {
            return Err(Error::Shape(format!(
                "unitary of dim {} on a {}-amplitude state",
                unitary.dim(),
                self.amps.len()
            )));
        }
        self.apply_leading_unitary(unitary)
    }

    /// Applies `unitary ⊗ I` where `unitary` acts on wires `0..m` with
    /// `2^m = unitary.dim()`.
    pub fn apply_leading_unitary(&mut self, unitary: &GateMatrix) -> Result<()> {
        let m = unitary.n_qubits();
        if m > self.n_qubits {
            return Err(Error::Shape(format!(
                "{m}-qubit unitary on a {}-qubit register",
                self.n_qubits
            )));
        }
        let rows = 1 << m;
        let cols = 1 << (self.n_qubits - m);
        let psi = ArrayView2::from_shape((rows, cols), &self.amps)
            .expect("amplitude count is rows * cols");
        let out = unitary.entries().dot(&psi);
        self.amps = out.into_iter().collect();
        Ok(())
    }

    /// `self ⊗ rhs`, with `self` on the leading wires.
    pub(crate) fn kron(&self, rhs: &StateVector) -> StateVector {
        let amps = self.amps.iter().flat_map(|&a| rhs.amps.iter().map(move |&b| a * b)).collect();
        StateVector { n_qubits: self.n_qubits + rhs.n_qubits, amps }
    }

    /// Rotates each wire `w` by `RX(features[w])`.
    pub fn angle_embed(&mut self, features: &[f64]) -> Result<()> {
        if features.len() != self.n_qubits {
            return Err(Error::Shape(format!(
                "{} features for {} qubits",
                features.len(),
                self.n_qubits
            )));
        }
        for (w, &f) in features.iter().enumerate() {
            self.apply_mat2(&gates::rx(f), w);
        }
        Ok(())
    }

    /// `⟨Z_wire⟩ = Σ_b (±1)|ψ_b|²`, `+` where the wire's bit is 0.
    pub fn expectation_z(&self, wire: usize) -> Result<f64> {
        self.check_wire(wire)?;
        Ok(self.expectation_z_unchecked(wire))
    }

    pub(crate) fn expectation_z_unchecked(&self, wire: usize) -> f64 {
        let s = self.stride(wire);
        let mut acc = 0.0;
        for block in self.amps.chunks_exact(2 * s) {
            let (lo, hi) = block.split_at(s);
            acc += lo.iter().map(|a| a.norm_sqr()).sum::<f64>();
            acc -= hi.iter().map(|a| a.norm_sqr()).sum::<f64>();
        }
        acc
    }

    /// `M[a][b] = Σ conj(bra_a) · self_b` over the amplitude pairs that differ
    /// only in `wire`, so `⟨bra| P_wire |self⟩ = Σ P[a][b] · M[a][b]` for any 2×2 `P`.
    pub(crate) fn local_overlap(&self, bra: &StateVector, wire: usize) -> Mat2 {
        let s = self.stride(wire);
        let zero = C64::new(0.0, 0.0);
        let mut m = [[zero; 2]; 2];
        for (kb, ks) in bra.amps.chunks_exact(2 * s).zip(self.amps.chunks_exact(2 * s)) {
            let (bl, bh) = kb.split_at(s);
            let (sl, sh) = ks.split_at(s);
            for i in 0..s {
                let (b0, b1) = (bl[i].conj(), bh[i].conj());
                m[0][0] += b0 * sl[i];
                m[0][1] += b0 * sh[i];
                m[1][0] += b1 * sl[i];
                m[1][1] += b1 * sh[i];
            }
        }
        Mat2(m)
    }

    pub(crate) fn apply_z_unchecked(&mut self, wire: usize) {
        let s = self.stride(wire);
        for block in self.amps.chunks_exact_mut(2 * s) {
            for a in &mut block[s..] {
                *a = -*a;
            }
        }
    }
}
