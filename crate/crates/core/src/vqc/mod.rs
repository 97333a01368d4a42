//! Variational quantum classifier: angle embedding, adjacency-derived
//! unitary, strongly-entangling layers, BCE cost, exact gradients, Adam.

mod adam;
mod circuit;
mod cost;
mod embed;
mod gradient;
mod train;

pub use adam::{AdamState, ADAM_BETA1, ADAM_BETA2, ADAM_EPS};
pub use circuit::{ring_range, AnsatzParams, CircuitConfig};
pub use cost::{bce_cost, bce_from_logits, predict, probability, PROB_CLAMP};
pub use embed::{embed_adjacency_unitary, resize_adjacency};
pub use gradient::{adjoint_grad, param_shift_grad, GradientMethod};
pub use train::{train, TrainHyper, TrainRecord};

pub(crate) use embed::wires_for_nodes;
pub(crate) use gradient::prepare_batch;
