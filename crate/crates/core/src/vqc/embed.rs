use ndarray::{s, Array2};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::householder_qr;
use crate::qsim::GateMatrix;
use crate::rng::{self, Purpose};

const RANK_TOL: f64 = 1e-12;
const DIAG_NUDGE: f64 = 1e-8;

/// Brings `adjacency` to `dim × dim`: the leading block when it is larger,
/// otherwise embedded top-left in a symmetrized seeded uniform(0, 1) matrix.
pub fn resize_adjacency(adjacency: &Array2<f64>, dim: usize, seed: u64) -> Array2<f64> {
    let n = adjacency.nrows().min(adjacency.ncols());
    if n >= dim {
        return adjacency.slice(s![..dim, ..dim]).to_owned();
    }
    let mut rng = rng::stream(seed, Purpose::EmbedPadding);
    let raw = Array2::from_shape_simple_fn((dim, dim), || rng.random::<f64>());
    let mut out = Array2::from_shape_fn((dim, dim), |(i, j)| 0.5 * (raw[[i, j]] + raw[[j, i]]));
    out.slice_mut(s![..n, ..n]).assign(&adjacency.slice(s![..n, ..n]));
    out
}

/// Orthogonal `Q` of the Householder QR (`diag(R) ≥ 0`) of the adjacency
/// resized to `2^n_qubits`. A rank-deficient matrix gets its diagonal nudged
/// by `1e-8` once before giving up.
pub fn embed_adjacency_unitary(adjacency: &Array2<f64>, n_qubits: usize, seed: u64) -> Result<GateMatrix> {
    if n_qubits == 0 || n_qubits > crate::qsim::MAX_QUBITS {
        return Err(Error::Capacity(format!("embedding on {n_qubits} qubits")));
    }
    let dim = 1usize << n_qubits;
    let mut m = resize_adjacency(adjacency, dim, seed);
    let mut qr = householder_qr(&m)?;
    if qr.min_relative_pivot() < RANK_TOL {
        log::warn!("adjacency block is rank deficient; nudging the diagonal by {DIAG_NUDGE:e}");
        m.diag_mut().mapv_inplace(|x| x + DIAG_NUDGE);
        qr = householder_qr(&m)?;
        if qr.min_relative_pivot() < RANK_TOL {
            return Err(Error::Numerical(format!(
                "adjacency block of dim {dim} stays rank deficient (relative pivot {:e})",
                qr.min_relative_pivot()
            )));
        }
    }
    GateMatrix::from_real(&qr.q)
}

/// Wires needed to index `n_nodes` graph nodes: `⌈log₂ n_nodes⌉`, at least 1.
pub(crate) fn wires_for_nodes(n_nodes: usize) -> usize {
    (n_nodes.max(2).next_power_of_two().trailing_zeros() as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphssl::{build_random_adjacency, OperatorMode};
    use crate::linalg::max_abs_diff;
    use crate::qsim::C64;
    use ndarray::arr2;

    #[test]
    fn identity_adjacency_gives_identity() {
        let u = embed_adjacency_unitary(&Array2::eye(8), 3, 0).unwrap();
        assert_eq!(*u.entries(), Array2::<C64>::eye(8));
    }

    #[test]
    fn permutation_adjacency_is_returned_unchanged() {
        let p = arr2(&[
            [0.0, 0.0, 1.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 1.0, 0.0, 0.0],
        ]);
        let u = embed_adjacency_unitary(&p, 2, 0).unwrap();
        let re = u.entries().mapv(|z| z.re);
        assert!(max_abs_diff(&re, &p) < 1e-14);
    }

    #[test]
    fn seeded_graphs_give_unitaries() {
        for (nodes, qubits) in [(150usize, 4usize), (150, 8), (20, 5), (64, 6)] {
            let g = build_random_adjacency(nodes, 3, OperatorMode::Spread).unwrap();
            let u1 = embed_adjacency_unitary(&g.adjacency, qubits, 3).unwrap();
            let u2 = embed_adjacency_unitary(&g.adjacency, qubits, 3).unwrap();
            assert!(u1.unitarity_deviation() <= 1e-10);
            assert_eq!(u1, u2);
        }
    }

    #[test]
    fn resize_truncates_and_pads() {
        let a = Array2::from_shape_fn((5, 5), |(i, j)| (i * 5 + j) as f64);
        assert_eq!(resize_adjacency(&a, 4, 0), a.slice(s![..4, ..4]));
        let padded = resize_adjacency(&a, 8, 1);
        assert_eq!(padded.slice(s![..5, ..5]), a);
        for i in 0..8 {
            for j in 0..8 {
                if i >= 5 || j >= 5 {
                    assert_eq!(padded[[i, j]], padded[[j, i]]);
                    assert!((0.0..1.0).contains(&padded[[i, j]]));
                }
            }
        }
        assert_eq!(padded, resize_adjacency(&a, 8, 1));
    }

    #[test]
    fn zero_adjacency_recovers_through_the_nudge() {
        let u = embed_adjacency_unitary(&Array2::zeros((4, 4)), 2, 0).unwrap();
        assert!(u.unitarity_deviation() < 1e-12);
    }

    #[test]
    fn wires_for_node_counts() {
        assert_eq!(wires_for_nodes(150), 8);
        assert_eq!(wires_for_nodes(178), 8);
        assert_eq!(wires_for_nodes(303), 9);
        assert_eq!(wires_for_nodes(569), 10);
        assert_eq!(wires_for_nodes(256), 8);
        assert_eq!(wires_for_nodes(1), 1);
    }
}
