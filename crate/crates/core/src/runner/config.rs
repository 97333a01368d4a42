use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::{FeatureMode, ScalingMode, SplitFractions};
use crate::error::{Error, Result};
use crate::graphssl::{OperatorMode, PseudoLabelRule, PSEUDO_LABEL_THRESHOLD};
use crate::qsim::MAX_QUBITS;
use crate::vqc::GradientMethod;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjacencyMode {
    /// Symmetrized uniform(0, 1) weights drawn from the seed.
    #[default]
    Random,
    /// Gaussian-weighted k-nearest-neighbour graph on the standardized features.
    Knn,
}

impl std::str::FromStr for AdjacencyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(AdjacencyMode::Random),
            "knn" => Ok(AdjacencyMode::Knn),
            other => Err(Error::Validation(format!("unknown adjacency mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdjacencyConfig {
    pub mode: AdjacencyMode,
    pub k: usize,
    pub sigma: f64,
}

impl Default for AdjacencyConfig {
    fn default() -> Self {
        AdjacencyConfig { mode: AdjacencyMode::Random, k: 10, sigma: 1.0 }
    }
}

/// Which rows the classifier is trained on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrainingPool {
    /// Labeled rows with their labels plus unlabeled rows with pseudo-labels.
    #[default]
    LabeledAndPseudo,
    LabeledOnly,
}

impl std::str::FromStr for TrainingPool {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "labeled_and_pseudo" | "labeled-and-pseudo" => Ok(TrainingPool::LabeledAndPseudo),
            "labeled_only" | "labeled-only" => Ok(TrainingPool::LabeledOnly),
            other => Err(Error::Validation(format!("unknown training pool `{other}`"))),
        }
    }
}

/// How many wires the adjacency unitary acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbedSpan {
    /// The leading `min(n, ⌈log₂ N⌉)` wires, enough to index every sample.
    #[default]
    Leading,
    /// All `n` wires (a `2^n × 2^n` QR; memory grows as `4^n`).
    Full,
}

impl std::str::FromStr for EmbedSpan {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "leading" => Ok(EmbedSpan::Leading),
            "full" => Ok(EmbedSpan::Full),
            other => Err(Error::Validation(format!("unknown embed span `{other}`"))),
        }
    }
}

/// Every knob of one experiment. Missing JSON fields take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: String,
    pub n_qubits: usize,
    pub n_layers: usize,
    pub alpha: f64,
    /// Propagation iterations `T`.
    pub prop_iters: usize,
    /// Training epochs `K`, one full-batch Adam step each.
    pub epochs: usize,
    pub lr: f64,
    pub seed: u64,
    pub split: SplitFractions,
    pub adjacency: AdjacencyConfig,
    pub operator: OperatorMode,
    pub features: FeatureMode,
    pub scaling: ScalingMode,
    /// Size of the entropy partition (the first wires); `None` means `⌈n/2⌉`.
    pub entropy_keep: Option<usize>,
    pub out_dir: PathBuf,
    pub pool: TrainingPool,
    pub pseudo_threshold: f64,
    pub pseudo_rule: PseudoLabelRule,
    pub gradient: GradientMethod,
    pub embed: EmbedSpan,
    /// Write measured wall times into results.csv instead of 0.
    pub record_timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dataset: "iris".into(),
            n_qubits: 4,
            n_layers: 5,
            alpha: 0.9,
            prop_iters: 1000,
            epochs: 100,
            lr: 0.01,
            seed: 0,
            split: SplitFractions::default(),
            adjacency: AdjacencyConfig::default(),
            operator: OperatorMode::default(),
            features: FeatureMode::default(),
            scaling: ScalingMode::default(),
            entropy_keep: None,
            out_dir: PathBuf::from("out"),
            pool: TrainingPool::default(),
            pseudo_threshold: PSEUDO_LABEL_THRESHOLD,
            pseudo_rule: PseudoLabelRule::default(),
            gradient: GradientMethod::default(),
            embed: EmbedSpan::default(),
            record_timing: false,
        }
    }
}

impl ExperimentConfig {
    pub fn entropy_partition(&self) -> usize {
        self.entropy_keep.unwrap_or(self.n_qubits.div_ceil(2))
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Validation(msg));
        if self.n_qubits == 0 || self.n_qubits > MAX_QUBITS {
            return Err(Error::Capacity(format!("n_qubits must be in 1..={MAX_QUBITS}, got {}", self.n_qubits)));
        }
        if !(0.0..1.0).contains(&self.alpha) {
            return fail(format!("alpha must be in [0, 1), got {}", self.alpha));
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return fail(format!("lr must be positive, got {}", self.lr));
        }
        if !(0.0..=1.0).contains(&self.pseudo_threshold) {
            return fail(format!("pseudo_threshold must be in [0, 1], got {}", self.pseudo_threshold));
        }
        if self.adjacency.k == 0 {
            return fail("adjacency.k must be at least 1".into());
        }
        if !(self.adjacency.sigma > 0.0 && self.adjacency.sigma.is_finite()) {
            return fail(format!("adjacency.sigma must be positive, got {}", self.adjacency.sigma));
        }
        if let Some(keep) = self.entropy_keep {
            if keep == 0 || keep >= self.n_qubits {
                return fail(format!("entropy_keep must be in 1..{}, got {keep}", self.n_qubits));
            }
        }
        self.split.validate()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }
}
