use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::pipeline::{run_single, RunResult};
use crate::error::{Error, Result, Stage};

/// Row `i` runs with `seed + i`; rows come back in request order.
fn sweep<F>(config: &ExperimentConfig, values: &[usize], set: F) -> Result<Vec<RunResult>>
where
    F: Fn(&mut ExperimentConfig, usize) + Sync,
{
    values
        .par_iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut row = config.clone();
            row.seed = config.seed.wrapping_add(i as u64);
            set(&mut row, v);
            run_single(&row)
        })
        .collect()
}

pub fn sweep_qubits(config: &ExperimentConfig, qubits: &[usize]) -> Result<Vec<RunResult>> {
    sweep(config, qubits, |c, q| c.n_qubits = q)
}

pub fn sweep_layers(config: &ExperimentConfig, layers: &[usize]) -> Result<Vec<RunResult>> {
    if let Some(bad) = layers.iter().find(|&&l| l == 0) {
        return Err(Error::Stage {
            stage: Stage::Config,
            source: Box::new(Error::Validation(format!("layer counts must be at least 1, got {bad}"))),
        });
    }
    sweep(config, layers, |c, l| c.n_layers = l)
}
