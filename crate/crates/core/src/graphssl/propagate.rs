use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Default cut on propagated scores; ties go to class 1.
pub const PSEUDO_LABEL_THRESHOLD: f64 = 0.5;

/// Single-column label scores, one row per graph node.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMatrix(pub Array1<f64>);

impl LabelMatrix {
    /// Initial matrix `Y`: `labels[i]` (indexed by node) on labeled rows, 0 elsewhere.
    pub fn from_labeled(n_nodes: usize, labeled: &[usize], labels: &[u8]) -> Result<Self> {
        let mut y = Array1::zeros(n_nodes);
        for &i in labeled {
            let l = *labels
                .get(i)
                .ok_or_else(|| Error::Index(format!("labeled row {i} has no label")))?;
            if i >= n_nodes {
                return Err(Error::Index(format!("labeled row {i} ≥ {n_nodes} nodes")));
            }
            if l > 1 {
                return Err(Error::Validation(format!("label {l} at row {i} is not binary")));
            }
            y[i] = f64::from(l);
        }
        Ok(LabelMatrix(y))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scores(&self) -> &Array1<f64> {
        &self.0
    }
}

fn check_dims(operator: &Array2<f64>, y: &LabelMatrix, alpha: f64) -> Result<()> {
    let n = operator.nrows();
    if operator.ncols() != n || y.len() != n {
        return Err(Error::Shape(format!(
            "operator {}x{} with {} label rows",
            n,
            operator.ncols(),
            y.len()
        )));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Validation(format!("alpha = {alpha} must lie in [0, 1)")));
    }
    Ok(())
}

/// Runs `F ← α·operator·F + (1−α)·Y` exactly `iterations` times from `F = Y`.
pub fn propagate_labels(operator: &Array2<f64>, y: &LabelMatrix, alpha: f64, iterations: usize) -> Result<LabelMatrix> {
    check_dims(operator, y, alpha)?;
    let anchor = &y.0 * (1.0 - alpha);
    let mut f = y.0.clone();
    for _ in 0..iterations {
        let mut next = operator.dot(&f);
        next *= alpha;
        next += &anchor;
        f = next;
    }
    if let Some(i) = f.iter().position(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!(
            "propagated score at row {i} is not finite after {iterations} iterations"
        )));
    }
    Ok(LabelMatrix(f))
}

/// Fixed point `F* = (1−α)(I − α·operator)^{-1} Y`.
pub fn closed_form_labels(operator: &Array2<f64>, y: &LabelMatrix, alpha: f64) -> Result<LabelMatrix> {
    check_dims(operator, y, alpha)?;
    let n = operator.nrows();
    let system = Array2::eye(n) - operator * alpha;
    let rhs = (&y.0 * (1.0 - alpha)).insert_axis(Axis(1));
    let x = linalg::solve(&system, &rhs)?;
    Ok(LabelMatrix(x.column(0).to_owned()))
}

/// How propagated scores become pseudo-labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PseudoLabelRule {
    /// Class 1 where the single-column score reaches the threshold.
    #[default]
    Threshold,
    /// Propagate one column per class and take the larger (ties to class 1).
    ClassMass,
}

impl std::str::FromStr for PseudoLabelRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "threshold" => Ok(PseudoLabelRule::Threshold),
            "class_mass" | "class-mass" => Ok(PseudoLabelRule::ClassMass),
            other => Err(Error::Validation(format!("unknown pseudo-label rule `{other}`"))),
        }
    }
}

/// 1 where the class-1 score is at least the class-0 score.
pub fn class_mass_labels(positive: &LabelMatrix, negative: &LabelMatrix, unlabeled: &[usize]) -> Result<Vec<u8>> {
    if positive.len() != negative.len() {
        return Err(Error::Shape(format!("score columns of length {} and {}", positive.len(), negative.len())));
    }
    unlabeled
        .iter()
        .map(|&i| match (positive.0.get(i), negative.0.get(i)) {
            (Some(&p), Some(&q)) => Ok(u8::from(p >= q)),
            _ => Err(Error::Index(format!("row {i} ≥ {} label rows", positive.len()))),
        })
        .collect()
}

/// Thresholds the scores of `unlabeled` rows: 1 where `F ≥ threshold`.
pub fn pseudo_labels(f: &LabelMatrix, unlabeled: &[usize], threshold: f64) -> Result<Vec<u8>> {
    unlabeled
        .iter()
        .map(|&i| {
            f.0.get(i)
                .map(|&v| u8::from(v >= threshold))
                .ok_or_else(|| Error::Index(format!("row {i} ≥ {} label rows", f.len())))
        })
        .collect()
}
