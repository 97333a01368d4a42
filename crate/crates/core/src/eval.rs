//! Binary confusion counts and the four summary metrics.
//!
//! Any ratio with a zero denominator is reported as 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    #[serde(flatten)]
    pub counts: Confusion,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Harmonic mean of precision and recall, 0 when both are 0.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    let s = precision + recall;
    if s > 0.0 {
        2.0 * precision * recall / s
    } else {
        0.0
    }
}

pub fn confusion(y_true: &[u8], y_pred: &[u8]) -> Result<Confusion> {
    if y_true.len() != y_pred.len() {
        return Err(Error::Shape(format!("{} true labels vs {} predictions", y_true.len(), y_pred.len())));
    }
    if y_true.is_empty() {
        return Err(Error::Validation("confusion of zero samples".into()));
    }
    let mut c = Confusion::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t, p) {
            (1, 1) => c.tp += 1,
            (0, 1) => c.fp += 1,
            (1, 0) => c.fn_ += 1,
            (0, 0) => c.tn += 1,
            _ => return Err(Error::Validation(format!("labels must be 0 or 1, got ({t}, {p})"))),
        }
    }
    Ok(c)
}

pub fn metrics_from_confusion(c: Confusion) -> MetricsReport {
    let precision = ratio(c.tp, c.tp + c.fp);
    let recall = ratio(c.tp, c.tp + c.fn_);
    MetricsReport {
        counts: c,
        accuracy: ratio(c.tp + c.tn, c.total()),
        precision,
        recall,
        f1: f1_score(precision, recall),
    }
}

pub fn evaluate(y_true: &[u8], y_pred: &[u8]) -> Result<MetricsReport> {
    confusion(y_true, y_pred).map(metrics_from_confusion)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_cases() {
        let c = confusion(&[1, 1, 0, 0], &[1, 0, 1, 0]).unwrap();
        assert_eq!(c, Confusion { tp: 1, fp: 1, fn_: 1, tn: 1 });
        let m = metrics_from_confusion(c);
        assert_eq!((m.accuracy, m.precision, m.recall, m.f1), (0.5, 0.5, 0.5, 0.5));
    }

    #[test]
    fn perfect_prediction() {
        let y = [1, 0, 1, 1, 0];
        assert_eq!(confusion(&y, &y).unwrap(), Confusion { tp: 3, fp: 0, fn_: 0, tn: 2 });
    }

    #[test]
    fn zero_denominators() {
        let m = metrics_from_confusion(Confusion { tp: 0, fp: 0, fn_: 5, tn: 5 });
        assert_eq!((m.precision, m.recall, m.f1, m.accuracy), (0.0, 0.0, 0.0, 0.5));
        assert_eq!(metrics_from_confusion(Confusion::default()).accuracy, 0.0);
    }

    #[test]
    fn reported_iris_triplet_is_consistent() {
        assert!((f1_score(0.666, 0.938) - 0.779).abs() < 1e-3);
    }

    #[test]
    fn input_errors() {
        assert!(matches!(confusion(&[1, 0], &[1]), Err(Error::Shape(_))));
        assert!(confusion(&[], &[]).is_err());
        assert!(confusion(&[2], &[1]).is_err());
    }

    #[test]
    fn serializes_counts_inline() {
        let m = metrics_from_confusion(Confusion { tp: 1, fp: 2, fn_: 3, tn: 4 });
        let v: serde_json::Value = serde_json::to_value(m).unwrap();
        assert_eq!(v["fn"], 3);
        assert_eq!(v["tp"], 1);
    }
}
