use std::time::Instant;

use ndarray::Axis;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{AdjacencyMode, EmbedSpan, ExperimentConfig, TrainingPool};
use crate::data::{clean, load_dataset, reduce_features, standardize, stratified_split, ScalingMode};
use crate::error::{Result, Stage, StageExt};
use crate::eval::{evaluate, MetricsReport};
use crate::graphssl::{
    build_knn_adjacency, build_random_adjacency, class_mass_labels, propagate_labels, pseudo_labels, LabelMatrix,
    PseudoLabelRule,
};
use crate::qsim::entanglement_entropy;
use crate::vqc::{
    bce_cost, embed_adjacency_unitary, predict, prepare_batch, train, wires_for_nodes, CircuitConfig, TrainHyper,
};

/// Everything one pipeline run produces.
#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub config: ExperimentConfig,
    pub metrics: MetricsReport,
    /// Mean of `entropies`, in bits.
    pub mean_entropy: f64,
    /// Entanglement entropy of each test sample's final state, in bits.
    pub entropies: Vec<f64>,
    /// Training cost at the final parameters.
    pub final_cost: f64,
    /// Cost before each Adam step.
    pub costs: Vec<f64>,
    pub wall_time_s: f64,
    pub test_indices: Vec<usize>,
    pub test_labels: Vec<u8>,
    pub predictions: Vec<u8>,
    pub logits: Vec<f64>,
    pub unlabeled_indices: Vec<usize>,
    pub pseudo_labels: Vec<u8>,
    /// Agreement of the pseudo-labels with the hidden true labels.
    pub pseudo_label_accuracy: f64,
    pub pool_size: usize,
    /// Wires the adjacency unitary acts on.
    pub embed_wires: usize,
    pub split_warnings: Vec<String>,
}

/// Preprocess, split, build the graph, propagate, pseudo-label, train the
/// circuit and score it on the test rows. Deterministic for a given config.
pub fn run_single(config: &ExperimentConfig) -> Result<RunResult> {
    let start = Instant::now();
    config.validate().stage(Stage::Config)?;
    let (n, seed) = (config.n_qubits, config.seed);

    let ds = load_dataset(&config.dataset).and_then(clean).stage(Stage::Preprocess)?;
    let n_samples = ds.n_samples();
    let split = stratified_split(&ds.labels, &config.split, seed).stage(Stage::Split)?;
    let fit_rows: Vec<usize> = match config.scaling {
        ScalingMode::AllRows => (0..n_samples).collect(),
        ScalingMode::NoLeakage => split.non_test(),
    };
    let (scaled, _) = standardize(ds.features.view(), &fit_rows).stage(Stage::Preprocess)?;
    let x = reduce_features(scaled.view(), n, config.features).stage(Stage::Preprocess)?;

    let graph = match config.adjacency.mode {
        AdjacencyMode::Random => build_random_adjacency(n_samples, seed, config.operator),
        AdjacencyMode::Knn => build_knn_adjacency(scaled.view(), config.adjacency.k, config.adjacency.sigma, config.operator),
    }
    .stage(Stage::Graph)?;

    let labeled_y: Vec<u8> = split.labeled.iter().map(|&i| ds.labels[i]).collect();
    let y = LabelMatrix::from_labeled(n_samples, &split.labeled, &ds.labels).stage(Stage::Propagate)?;
    let f = propagate_labels(&graph.operator, &y, config.alpha, config.prop_iters).stage(Stage::Propagate)?;
    let pseudo = match config.pseudo_rule {
        PseudoLabelRule::Threshold => pseudo_labels(&f, &split.unlabeled, config.pseudo_threshold),
        PseudoLabelRule::ClassMass => {
            let flipped: Vec<u8> = ds.labels.iter().map(|&l| 1 - l).collect();
            LabelMatrix::from_labeled(n_samples, &split.labeled, &flipped)
                .and_then(|y0| propagate_labels(&graph.operator, &y0, config.alpha, config.prop_iters))
                .and_then(|f0| class_mass_labels(&f, &f0, &split.unlabeled))
        }
    }
    .stage(Stage::Propagate)?;
    let pseudo_hits = split.unlabeled.iter().zip(&pseudo).filter(|(&i, &p)| ds.labels[i] == p).count();
    let pseudo_label_accuracy = pseudo_hits as f64 / split.unlabeled.len() as f64;
    log::info!(
        "{}: {} of {} pseudo-labels positive, {:.3} agree with the hidden labels",
        config.dataset,
        pseudo.iter().filter(|&&p| p == 1).count(),
        pseudo.len(),
        pseudo_label_accuracy
    );

    let embed_wires = match config.embed {
        EmbedSpan::Leading => n.min(wires_for_nodes(n_samples)),
        EmbedSpan::Full => n,
    };
    log::debug!("propagated at {:.2}s", start.elapsed().as_secs_f64());
    let unitary = embed_adjacency_unitary(&graph.adjacency, embed_wires, seed).stage(Stage::Circuit)?;
    let circuit = CircuitConfig::new(n, config.n_layers, unitary, 0).stage(Stage::Circuit)?;

    log::debug!("embedding unitary on {embed_wires} wires at {:.2}s", start.elapsed().as_secs_f64());
    let mut pool: Vec<(usize, u8)> = split.labeled.iter().copied().zip(labeled_y).collect();
    if config.pool == TrainingPool::LabeledAndPseudo {
        pool.extend(split.unlabeled.iter().copied().zip(pseudo.iter().copied()));
    }
    pool.sort_unstable_by_key(|&(i, _)| i);
    let (pool_rows, pool_y): (Vec<usize>, Vec<u8>) = pool.into_iter().unzip();
    let x_pool = x.select(Axis(0), &pool_rows);
    let hyper = TrainHyper { lr: config.lr, epochs: config.epochs, seed, gradient: config.gradient };
    let record = train(x_pool.view(), &pool_y, &circuit, &hyper).stage(Stage::Train)?;
    let final_cost = bce_cost(&record.final_params, x_pool.view(), &pool_y, &circuit).stage(Stage::Train)?;

    log::debug!("trained at {:.2}s", start.elapsed().as_secs_f64());
    let x_test = x.select(Axis(0), &split.test);
    let prepared = prepare_batch(&circuit, x_test.view()).stage(Stage::Evaluate)?;
    let keep: Vec<usize> = (0..config.entropy_partition()).collect();
    let scored: Vec<(f64, f64)> = prepared
        .par_iter()
        .map(|s| {
            let state = circuit.final_state_unchecked(s, &record.final_params);
            let logit = state.expectation_z(circuit.measure_wire())?;
            // a single wire has no bipartition; its pure state carries no entanglement
            let entropy = if n == 1 { 0.0 } else { entanglement_entropy(&state, &keep)? };
            Ok((logit, entropy))
        })
        .collect::<Result<_>>()
        .stage(Stage::Evaluate)?;
    let (logits, entropies): (Vec<f64>, Vec<f64>) = scored.into_iter().unzip();
    let predictions: Vec<u8> = logits.iter().map(|&z| predict(z)).collect();
    let test_labels: Vec<u8> = split.test.iter().map(|&i| ds.labels[i]).collect();
    let metrics = evaluate(&test_labels, &predictions).stage(Stage::Evaluate)?;
    log::debug!("evaluated at {:.2}s", start.elapsed().as_secs_f64());
    let mean_entropy = entropies.iter().sum::<f64>() / entropies.len() as f64;

    Ok(RunResult {
        config: config.clone(),
        metrics,
        mean_entropy,
        entropies,
        final_cost,
        costs: record.costs,
        wall_time_s: start.elapsed().as_secs_f64(),
        test_indices: split.test,
        test_labels,
        predictions,
        logits,
        unlabeled_indices: split.unlabeled,
        pseudo_labels: pseudo,
        pseudo_label_accuracy,
        pool_size: pool_rows.len(),
        embed_wires,
        split_warnings: split.warnings,
    })
}
