//! Sample graphs, normalized propagation operators and Laplacian label
//! refinement.

mod graph;
mod propagate;

pub use graph::{build_knn_adjacency, build_random_adjacency, normalized_operator, GraphMatrices, OperatorMode};
pub use propagate::{
    class_mass_labels, closed_form_labels, propagate_labels, pseudo_labels, LabelMatrix, PseudoLabelRule,
    PSEUDO_LABEL_THRESHOLD,
};
