use ndarray::Array2;

use super::{HermitianMatrix, StateVector, C64};
use crate::error::{Error, Result};

/// Eigenvalues below this contribute nothing to the entropy sum.
pub const EIGEN_CLAMP: f64 = 1e-12;

fn validate_keep(n_qubits: usize, keep: &[usize]) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::Validation("subsystem to keep is empty".into()));
    }
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Validation(format!("duplicate wires in {keep:?}")));
    }
    if let Some(&w) = sorted.last().filter(|&&w| w >= n_qubits) {
        return Err(Error::Index(format!("wire {w} out of range for {n_qubits} qubits")));
    }
    if sorted.len() == n_qubits {
        return Err(Error::Validation("subsystem to keep is the whole register".into()));
    }
    Ok(sorted)
}

/// `ρ_A = Tr_B |ψ⟩⟨ψ|` for `A = keep`. Row/column index bits of `ρ_A` follow
/// the kept wires in ascending order, most significant first.
pub fn reduced_density(state: &StateVector, keep: &[usize]) -> Result<HermitianMatrix> {
    let n = state.n_qubits();
    let keep = validate_keep(n, keep)?;
    let rest: Vec<usize> = (0..n).filter(|w| !keep.contains(w)).collect();
    let (ka, kb) = (keep.len(), rest.len());

    // ψ reshaped to (2^|A|, 2^|B|)
    let mut psi = Array2::<C64>::zeros((1 << ka, 1 << kb));
    for (b, amp) in state.amplitudes().iter().enumerate() {
        let bit = |w: usize| (b >> (n - 1 - w)) & 1;
        let a_idx = keep.iter().fold(0, |acc, &w| (acc << 1) | bit(w));
        let b_idx = rest.iter().fold(0, |acc, &w| (acc << 1) | bit(w));
        psi[[a_idx, b_idx]] = *amp;
    }

    let dim = 1 << ka;
    let mut rho = Array2::<C64>::zeros((dim, dim));
    for i in 0..dim {
        let ri = psi.row(i);
        for j in i..dim {
            let rj = psi.row(j);
            let v: C64 = ri.iter().zip(rj.iter()).map(|(x, y)| x * y.conj()).sum();
            rho[[i, j]] = v;
            rho[[j, i]] = v.conj();
        }
        rho[[i, i]].im = 0.0;
    }
    Ok(HermitianMatrix::from_entries_unchecked(rho))
}

/// `−Σ λ log₂ λ` over the spectrum of a density matrix, in bits.
pub fn von_neumann_entropy(rho: &HermitianMatrix) -> Result<f64> {
    let s: f64 = rho
        .eigvals()?
        .into_iter()
        .filter(|&l| l >= EIGEN_CLAMP)
        .map(|l| -l * l.log2())
        .sum();
    Ok(s.max(0.0))
}

/// Entanglement entropy between `keep` and the rest of the register, in bits.
pub fn entanglement_entropy(state: &StateVector, keep: &[usize]) -> Result<f64> {
    von_neumann_entropy(&reduced_density(state, keep)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bell() -> StateVector {
        let r = C64::new(FRAC_1_SQRT_2, 0.0);
        let z = C64::new(0.0, 0.0);
        StateVector::from_amplitudes(vec![r, z, z, r]).unwrap()
    }

    fn ghz(n: usize) -> StateVector {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
        amps[(1 << n) - 1] = C64::new(FRAC_1_SQRT_2, 0.0);
        StateVector::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let rho = reduced_density(&bell(), &[0]).unwrap();
        let e = rho.entries();
        assert!((e[[0, 0]].re - 0.5).abs() < 1e-15 && (e[[1, 1]].re - 0.5).abs() < 1e-15);
        assert!(e[[0, 1]].norm() < 1e-15);
        assert!((entanglement_entropy(&bell(), &[0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_marginal_is_pure() {
        let s = StateVector::zero(2).unwrap();
        let rho = reduced_density(&s, &[0]).unwrap();
        assert_eq!(rho.entries()[[0, 0]], C64::new(1.0, 0.0));
        assert_eq!(rho.entries()[[1, 1]], C64::new(0.0, 0.0));
        for keep in [vec![0], vec![1], vec![0, 2], vec![3]] {
            assert_eq!(entanglement_entropy(&StateVector::zero(4).unwrap(), &keep).unwrap(), 0.0);
        }
    }

    #[test]
    fn ghz_half_register_has_one_bit() {
        let rho = reduced_density(&ghz(4), &[0, 1]).unwrap();
        let ev = rho.eigvals().unwrap();
        let expect = [0.0, 0.0, 0.5, 0.5];
        for (a, b) in ev.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((entanglement_entropy(&ghz(4), &[0, 1]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_partitions() {
        let s = StateVector::zero(3).unwrap();
        assert!(matches!(reduced_density(&s, &[]), Err(Error::Validation(_))));
        assert!(matches!(reduced_density(&s, &[0, 1, 2]), Err(Error::Validation(_))));
        assert!(matches!(reduced_density(&s, &[0, 0]), Err(Error::Validation(_))));
        assert!(matches!(reduced_density(&s, &[3]), Err(Error::Index(_))));
    }

    #[test]
    fn keep_order_is_irrelevant() {
        let mut s = StateVector::zero(3).unwrap();
        s.angle_embed(&[0.3, 1.0, 2.0]).unwrap();
        s.apply_cnot(0, 2).unwrap();
        assert_eq!(reduced_density(&s, &[2, 0]).unwrap(), reduced_density(&s, &[0, 2]).unwrap());
    }
}
