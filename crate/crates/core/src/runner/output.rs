use std::path::{Path, PathBuf};

use serde_json::json;

use super::config::ExperimentConfig;
use super::pipeline::RunResult;
use crate::error::{Error, Result};
use crate::rng::RNG_ALGORITHM;

pub const RESULTS_HEADER: &str =
    "dataset,qubits,layers,seed,test_accuracy,precision,recall,f1,mean_entropy,final_cost,wall_time_s";

/// Paths written by [`emit_outputs`].
#[derive(Debug, Clone)]
pub struct OutputFiles {
    pub results: PathBuf,
    pub accuracy_vs_qubits: PathBuf,
    pub accuracy_vs_layers: PathBuf,
    pub entropy_vs_layers: PathBuf,
    pub accuracy_vs_entropy: PathBuf,
    pub predictions: PathBuf,
    pub costs: PathBuf,
    pub config: PathBuf,
    pub manifest: PathBuf,
}

impl OutputFiles {
    fn new(dir: &Path) -> Self {
        OutputFiles {
            results: dir.join("results.csv"),
            accuracy_vs_qubits: dir.join("accuracy_vs_qubits.csv"),
            accuracy_vs_layers: dir.join("accuracy_vs_layers.csv"),
            entropy_vs_layers: dir.join("entropy_vs_layers.csv"),
            accuracy_vs_entropy: dir.join("accuracy_vs_entropy.csv"),
            predictions: dir.join("predictions.csv"),
            costs: dir.join("costs.csv"),
            config: dir.join("config.json"),
            manifest: dir.join("manifest.json"),
        }
    }

    pub fn csv_files(&self) -> [&Path; 7] {
        [
            &self.results,
            &self.accuracy_vs_qubits,
            &self.accuracy_vs_layers,
            &self.entropy_vs_layers,
            &self.accuracy_vs_entropy,
            &self.predictions,
            &self.costs,
        ]
    }
}

fn write_csv(path: &Path, header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let io = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::io(path, e),
        other => Error::Validation(format!("{}: {other:?}", path.display())),
    };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header.split(',')).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn wall_time(r: &RunResult) -> f64 {
    if r.config.record_timing {
        r.wall_time_s
    } else {
        0.0
    }
}

/// Write results.csv, the four plot tables, per-sample predictions, cost
/// histories, the config snapshot and a manifest of conventions. Files are
/// byte-identical across reruns unless timing is recorded.
pub fn emit_outputs(results: &[RunResult], config: &ExperimentConfig, out_dir: &Path) -> Result<OutputFiles> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let files = OutputFiles::new(out_dir);
    let key = |r: &RunResult| {
        vec![r.config.dataset.clone(), r.config.n_qubits.to_string(), r.config.n_layers.to_string()]
    };

    write_csv(
        &files.results,
        RESULTS_HEADER,
        results.iter().map(|r| {
            let m = &r.metrics;
            let mut row = key(r);
            row.extend([
                r.config.seed.to_string(),
                m.accuracy.to_string(),
                m.precision.to_string(),
                m.recall.to_string(),
                m.f1.to_string(),
                r.mean_entropy.to_string(),
                r.final_cost.to_string(),
                wall_time(r).to_string(),
            ]);
            row
        }),
    )?;
    write_csv(
        &files.accuracy_vs_qubits,
        "dataset,qubits,test_accuracy",
        results.iter().map(|r| vec![r.config.dataset.clone(), r.config.n_qubits.to_string(), r.metrics.accuracy.to_string()]),
    )?;
    write_csv(
        &files.accuracy_vs_layers,
        "dataset,layers,test_accuracy",
        results.iter().map(|r| vec![r.config.dataset.clone(), r.config.n_layers.to_string(), r.metrics.accuracy.to_string()]),
    )?;
    write_csv(
        &files.entropy_vs_layers,
        "dataset,layers,mean_entropy",
        results.iter().map(|r| vec![r.config.dataset.clone(), r.config.n_layers.to_string(), r.mean_entropy.to_string()]),
    )?;
    write_csv(
        &files.accuracy_vs_entropy,
        "dataset,qubits,layers,mean_entropy,test_accuracy",
        results.iter().map(|r| {
            let mut row = key(r);
            row.extend([r.mean_entropy.to_string(), r.metrics.accuracy.to_string()]);
            row
        }),
    )?;
    write_csv(
        &files.predictions,
        "dataset,qubits,layers,seed,sample,true_label,predicted,logit,entropy",
        results.iter().flat_map(|r| {
            (0..r.test_indices.len()).map(move |i| {
                let mut row = key(r);
                row.extend([
                    r.config.seed.to_string(),
                    r.test_indices[i].to_string(),
                    r.test_labels[i].to_string(),
                    r.predictions[i].to_string(),
                    r.logits[i].to_string(),
                    r.entropies[i].to_string(),
                ]);
                row
            })
        }),
    )?;
    write_csv(
        &files.costs,
        "dataset,qubits,layers,seed,step,cost",
        results.iter().flat_map(|r| {
            r.costs.iter().enumerate().map(move |(step, c)| {
                let mut row = key(r);
                row.extend([r.config.seed.to_string(), step.to_string(), c.to_string()]);
                row
            })
        }),
    )?;

    config.save(&files.config)?;
    let rows: Vec<_> = results
        .iter()
        .map(|r| {
            json!({
                "dataset": r.config.dataset,
                "qubits": r.config.n_qubits,
                "layers": r.config.n_layers,
                "seed": r.config.seed,
                "entropy_keep": r.config.entropy_partition(),
                "embed_wires": r.embed_wires,
                "pool_size": r.pool_size,
                "pseudo_label_accuracy": r.pseudo_label_accuracy,
                "confusion": r.metrics.counts,
                "split_warnings": r.split_warnings,
            })
        })
        .collect();
    let manifest = json!({
        "tool": concat!("qssl ", env!("CARGO_PKG_VERSION")),
        "rng": RNG_ALGORITHM,
        "seed_policy": "sweep row i uses seed + i",
        "conventions": {
            "wire_order": "wire 0 is the most significant bit of the basis index",
            "prediction": "class 1 iff logit > 0",
            "pseudo_label": "threshold rule: class 1 iff propagated score >= pseudo_threshold; class_mass rule: class 1 iff class-1 score >= class-0 score",
            "metrics_zero_division": "precision, recall and f1 are 0 when their denominator is 0",
            "entropy": "von Neumann entropy in bits of the first entropy_keep wires, averaged over test samples",
            "final_cost": "training BCE at the final parameters",
            "wall_time_s": "0 unless record_timing is set",
        },
        "config": config,
        "rows": rows,
    });
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    std::fs::write(&files.manifest, text).map_err(|e| Error::io(&files.manifest, e))?;
    Ok(files)
}
