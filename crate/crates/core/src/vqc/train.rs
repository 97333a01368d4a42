use std::time::Instant;

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use super::adam::AdamState;
use super::circuit::{AnsatzParams, CircuitConfig};
use super::gradient::{cost_and_grad_prepared, prepare_batch, GradientMethod};
use crate::error::{Error, Result};
use crate::rng::{self, Purpose};

/// Optimizer settings for [`train`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainHyper {
    pub lr: f64,
    pub epochs: usize,
    pub seed: u64,
    #[serde(default)]
    pub gradient: GradientMethod,
}

impl Default for TrainHyper {
    fn default() -> Self {
        TrainHyper { lr: 0.01, epochs: 100, seed: 0, gradient: GradientMethod::default() }
    }
}

#[derive(Debug, Clone)]
pub struct TrainRecord {
    /// Cost evaluated at the start of each step, before the update.
    pub costs: Vec<f64>,
    pub final_params: AnsatzParams,
    pub steps: usize,
    pub wall_time_s: f64,
}

/// Full-batch Adam from a uniform `[0, 2π)` initialization drawn from the
/// seed's parameter stream.
pub fn train(x: ArrayView2<f64>, y: &[u8], config: &CircuitConfig, hyper: &TrainHyper) -> Result<TrainRecord> {
    if x.nrows() == 0 {
        return Err(Error::Validation("empty training set".into()));
    }
    if x.nrows() != y.len() {
        return Err(Error::Shape(format!("{} training rows with {} labels", x.nrows(), y.len())));
    }
    if !(hyper.lr > 0.0 && hyper.lr.is_finite()) {
        return Err(Error::Validation(format!("learning rate must be positive, got {}", hyper.lr)));
    }
    let start = Instant::now();
    let mut init_rng = rng::stream(hyper.seed, Purpose::ParamInit);
    let mut params = AnsatzParams::random_uniform(config.n_layers(), config.n_qubits(), &mut init_rng);
    let prepared = prepare_batch(config, x)?;
    let mut adam = AdamState::new(params.as_array().dim());
    let mut costs = Vec::with_capacity(hyper.epochs);
    for step in 0..hyper.epochs {
        let (cost, grad) = cost_and_grad_prepared(config, &prepared, y, &params, hyper.gradient)?;
        if !cost.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFiniteCost { step, value: cost });
        }
        costs.push(cost);
        adam.step(params.as_array_mut(), &grad, hyper.lr)?;
        if step % 10 == 0 {
            log::debug!("step {step}: cost {cost:.6}");
        }
    }
    Ok(TrainRecord { steps: costs.len(), costs, final_params: params, wall_time_s: start.elapsed().as_secs_f64() })
}
