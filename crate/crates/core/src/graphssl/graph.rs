use ndarray::{Array1, Array2, ArrayView2};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Purpose};

/// Which normalization of the adjacency drives propagation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorMode {
    /// `S = D^{-1/2} A D^{-1/2}`
    #[default]
    Spread,
    /// `I − S`
    Laplacian,
}

impl std::str::FromStr for OperatorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spread" => Ok(OperatorMode::Spread),
            "laplacian" => Ok(OperatorMode::Laplacian),
            other => Err(Error::Validation(format!("unknown operator mode `{other}`"))),
        }
    }
}

/// Adjacency, degrees and the normalized operator over one sample graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphMatrices {
    pub adjacency: Array2<f64>,
    pub degree: Array1<f64>,
    pub operator: Array2<f64>,
    pub mode: OperatorMode,
}

impl GraphMatrices {
    /// Validates `adjacency` (square, symmetric, non-negative), gives
    /// isolated nodes a unit self-loop, and derives degrees and the operator.
    pub fn from_adjacency(mut adjacency: Array2<f64>, mode: OperatorMode) -> Result<Self> {
        let n = adjacency.nrows();
        if adjacency.ncols() != n {
            return Err(Error::Shape(format!("adjacency is {}x{}", n, adjacency.ncols())));
        }
        for ((i, j), &w) in adjacency.indexed_iter() {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::Validation(format!("adjacency[{i}][{j}] = {w} is not a finite non-negative weight")));
            }
            if j > i && (w - adjacency[[j, i]]).abs() > 1e-12 {
                return Err(Error::Validation(format!("adjacency is not symmetric at ({i}, {j})")));
            }
        }
        for i in 0..n {
            if adjacency.row(i).sum() == 0.0 {
                adjacency[[i, i]] = 1.0;
            }
        }
        let degree = adjacency.sum_axis(ndarray::Axis(1));
        let operator = scaled_operator(adjacency.view(), &degree, mode);
        Ok(GraphMatrices {
            adjacency,
            degree,
            operator,
            mode,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.adjacency.nrows()
    }
}

fn scaled_operator(a: ArrayView2<f64>, degree: &Array1<f64>, mode: OperatorMode) -> Array2<f64> {
    let inv_sqrt = degree.mapv(|d| 1.0 / d.sqrt());
    let n = a.nrows();
    let mut s = Array2::from_shape_fn((n, n), |(i, j)| inv_sqrt[i] * a[[i, j]] * inv_sqrt[j]);
    // exact symmetry regardless of rounding order
    for i in 0..n {
        for j in (i + 1)..n {
            let v = s[[i, j]];
            s[[j, i]] = v;
        }
    }
    match mode {
        OperatorMode::Spread => s,
        OperatorMode::Laplacian => Array2::eye(n) - s,
    }
}

/// Normalized operator of an adjacency matrix (`S` or `I − S`).
pub fn normalized_operator(adjacency: &Array2<f64>, mode: OperatorMode) -> Result<Array2<f64>> {
    Ok(GraphMatrices::from_adjacency(adjacency.clone(), mode)?.operator)
}

/// Random dense graph `A_ij = ½(U_ij + U_ji)` with `U` uniform on (0, 1),
/// drawn row-major from the adjacency stream of `seed`; zero diagonal.
pub fn build_random_adjacency(n_nodes: usize, seed: u64, mode: OperatorMode) -> Result<GraphMatrices> {
    if n_nodes < 2 {
        return Err(Error::Validation(format!("random graph needs at least 2 nodes, got {n_nodes}")));
    }
    let mut rng = rng::stream(seed, Purpose::Adjacency);
    let u = Array2::from_shape_simple_fn((n_nodes, n_nodes), || rng.random::<f64>());
    GraphMatrices::from_adjacency(symmetrize_zero_diag(&u), mode)
}

pub(crate) fn symmetrize_zero_diag(u: &Array2<f64>) -> Array2<f64> {
    let n = u.nrows();
    Array2::from_shape_fn((n, n), |(i, j)| if i == j { 0.0 } else { 0.5 * (u[[i, j]] + u[[j, i]]) })
}

/// Gaussian-weighted k-nearest-neighbour graph. `j` is a neighbour of `i`
/// when its distance is no larger than the k-th smallest distance from `i`
/// (ties included); an edge exists if either endpoint selects the other.
pub fn build_knn_adjacency(features: ArrayView2<f64>, k: usize, sigma: f64, mode: OperatorMode) -> Result<GraphMatrices> {
    let n = features.nrows();
    if n < 2 {
        return Err(Error::Validation(format!("kNN graph needs at least 2 samples, got {n}")));
    }
    if k == 0 || k >= n {
        return Err(Error::Validation(format!("k = {k} must satisfy 1 ≤ k < {n}")));
    }
    if !(sigma > 0.0) {
        return Err(Error::Validation(format!("sigma = {sigma} must be positive")));
    }
    let mut d2 = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let d: f64 = features
                .row(i)
                .iter()
                .zip(features.row(j).iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            d2[[i, j]] = d;
            d2[[j, i]] = d;
        }
    }
    let mut selected = Array2::from_elem((n, n), false);
    let mut row: Vec<f64> = Vec::with_capacity(n - 1);
    for i in 0..n {
        row.clear();
        row.extend((0..n).filter(|&j| j != i).map(|j| d2[[i, j]]));
        row.sort_by(f64::total_cmp);
        let kth = row[k - 1];
        for j in 0..n {
            if j != i && d2[[i, j]] <= kth {
                selected[[i, j]] = true;
            }
        }
    }
    let denom = 2.0 * sigma * sigma;
    let w = Array2::from_shape_fn((n, n), |(i, j)| {
        if i != j && (selected[[i, j]] || selected[[j, i]]) {
            (-d2[[i, j]] / denom).exp()
        } else {
            0.0
        }
    });
    GraphMatrices::from_adjacency(w, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use ndarray::arr2;

    #[test]
    fn random_graph_is_symmetric_with_zero_diagonal_and_seeded() {
        let g = build_random_adjacency(40, 9, OperatorMode::Spread).unwrap();
        assert_eq!(g.adjacency, g.adjacency.t());
        assert!(g.adjacency.diag().iter().all(|&x| x == 0.0));
        assert!(g.adjacency.iter().all(|&x| (0.0..=1.0).contains(&x)));
        let again = build_random_adjacency(40, 9, OperatorMode::Spread).unwrap();
        assert_eq!(g, again);
        for i in 0..40 {
            assert!((g.degree[i] - g.adjacency.row(i).sum()).abs() < 1e-10);
        }
        assert!(matches!(build_random_adjacency(1, 0, OperatorMode::Spread), Err(Error::Validation(_))));
    }

    #[test]
    fn random_graph_mean_weight_is_one_half() {
        let g = build_random_adjacency(1000, 2024, OperatorMode::Spread).unwrap();
        let n = 1000.0;
        let mean = g.adjacency.sum() / (n * (n - 1.0));
        assert!((0.48..=0.52).contains(&mean), "mean {mean}");
    }

    #[test]
    fn operator_examples() {
        let a = arr2(&[[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(normalized_operator(&a, OperatorMode::Spread).unwrap(), a);
        assert_eq!(
            normalized_operator(&a, OperatorMode::Laplacian).unwrap(),
            arr2(&[[1.0, -1.0], [-1.0, 1.0]])
        );
        let a2 = arr2(&[[0.0, 2.0], [2.0, 0.0]]);
        // D = diag(2, 2): 2^{-1/2} · 2 · 2^{-1/2} = 1
        let s = normalized_operator(&a2, OperatorMode::Spread).unwrap();
        assert!(max_abs_diff(&s, &a) < 1e-15);
    }

    #[test]
    fn operator_rejects_negative_weights_and_handles_isolated_nodes() {
        let bad = arr2(&[[0.0, -1.0], [-1.0, 0.0]]);
        assert!(matches!(normalized_operator(&bad, OperatorMode::Spread), Err(Error::Validation(_))));
        let isolated = arr2(&[[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        let g = GraphMatrices::from_adjacency(isolated, OperatorMode::Spread).unwrap();
        assert_eq!(g.degree[2], 1.0);
        assert_eq!(g.operator[[2, 2]], 1.0);
    }

    #[test]
    fn spread_plus_laplacian_is_identity() {
        let g = build_random_adjacency(30, 4, OperatorMode::Spread).unwrap();
        let l = normalized_operator(&g.adjacency, OperatorMode::Laplacian).unwrap();
        assert!(max_abs_diff(&(&g.operator + &l), &Array2::eye(30)) < 1e-10);
    }

    #[test]
    fn knn_identical_points_and_far_points() {
        let x = arr2(&[[1.0, 2.0], [1.0, 2.0]]);
        let g = build_knn_adjacency(x.view(), 1, 1.0, OperatorMode::Spread).unwrap();
        assert_eq!(g.adjacency[[0, 1]], 1.0);

        let x = arr2(&[[0.0], [1e3]]);
        let g = build_knn_adjacency(x.view(), 1, 1.0, OperatorMode::Spread).unwrap();
        assert_eq!(g.adjacency[[0, 1]], 0.0);

        // all rows identical: complete graph of unit weights
        let x = Array2::<f64>::ones((5, 3));
        let g = build_knn_adjacency(x.view(), 2, 0.5, OperatorMode::Spread).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(g.adjacency[[i, j]], if i == j { 0.0 } else { 1.0 });
            }
        }
    }

    #[test]
    fn knn_line_matches_exhaustive_oracle() {
        let pts = [0.0, 1.0, 3.0, 3.5, 7.0];
        let x = Array2::from_shape_fn((5, 1), |(i, _)| pts[i]);
        let g = build_knn_adjacency(x.view(), 2, 1.0, OperatorMode::Spread).unwrap();
        // oracle: enumerate every pair, rank all other points by distance
        for i in 0..5 {
            for j in 0..5 {
                let d = |a: usize, b: usize| (pts[a] - pts[b]).abs();
                let in_knn = |a: usize, b: usize| {
                    let closer = (0..5).filter(|&c| c != a && d(a, c) < d(a, b)).count();
                    a != b && closer < 2
                };
                let expect = if in_knn(i, j) || in_knn(j, i) {
                    (-(d(i, j) * d(i, j)) / 2.0).exp()
                } else {
                    0.0
                };
                assert!((g.adjacency[[i, j]] - expect).abs() < 1e-15, "({i},{j})");
            }
        }
    }

    #[test]
    fn knn_parameter_validation() {
        let x = Array2::<f64>::zeros((3, 1));
        assert!(build_knn_adjacency(x.view(), 3, 1.0, OperatorMode::Spread).is_err());
        assert!(build_knn_adjacency(x.view(), 1, 0.0, OperatorMode::Spread).is_err());
    }
}
