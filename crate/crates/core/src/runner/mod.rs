//! Experiment orchestration: configuration, the end-to-end pipeline, sweeps
//! and plot-ready CSV output.

mod config;
mod output;
mod pipeline;
mod sweep;

pub use config::{AdjacencyConfig, AdjacencyMode, EmbedSpan, ExperimentConfig, TrainingPool};
pub use output::{emit_outputs, OutputFiles, RESULTS_HEADER};
pub use pipeline::{run_single, RunResult};
pub use sweep::{sweep_layers, sweep_qubits};
