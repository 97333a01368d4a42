use ndarray::ArrayView2;

use super::circuit::{AnsatzParams, CircuitConfig};
use crate::error::{Error, Result};

/// Probabilities are kept inside `[PROB_CLAMP, 1 − PROB_CLAMP]` before
/// taking logarithms.
pub const PROB_CLAMP: f64 = 1e-12;

/// Logistic map `1 / (1 + e^{−logit})`.
pub fn probability(logit: f64) -> f64 {
    1.0 / (1.0 + (-logit).exp())
}

/// Class 1 when the logit is strictly positive.
pub fn predict(logit: f64) -> u8 {
    u8::from(logit > 0.0)
}

/// Mean binary cross-entropy of `labels` under `logits`, summed in index order.
pub fn bce_from_logits(logits: &[f64], labels: &[u8]) -> Result<f64> {
    if logits.is_empty() {
        return Err(Error::Validation("cross-entropy of an empty batch".into()));
    }
    if logits.len() != labels.len() {
        return Err(Error::Shape(format!("{} logits for {} labels", logits.len(), labels.len())));
    }
    let mut total = 0.0;
    for (&z, &y) in logits.iter().zip(labels) {
        let p = probability(z).clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
        total -= match y {
            1 => p.ln(),
            0 => (1.0 - p).ln(),
            other => return Err(Error::Validation(format!("label {other} is not binary"))),
        };
    }
    Ok(total / logits.len() as f64)
}

/// Mean binary cross-entropy of the classifier over a batch.
pub fn bce_cost(params: &AnsatzParams, x: ArrayView2<f64>, y: &[u8], config: &CircuitConfig) -> Result<f64> {
    if x.nrows() == 0 {
        return Err(Error::Validation("cross-entropy of an empty batch".into()));
    }
    let logits = x
        .rows()
        .into_iter()
        .map(|row| config.forward(row, params))
        .collect::<Result<Vec<_>>>()?;
    bce_from_logits(&logits, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use std::f64::consts::LN_2;

    #[test]
    fn probability_values() {
        assert_eq!(probability(0.0), 0.5);
        assert!((probability(50.0) - 1.0).abs() < 1e-15);
        let expect = 1.0 / (1.0 + (-1.0f64).exp());
        assert!((probability(1.0) - expect).abs() < 1e-16);
        assert!((probability(1.0) - 0.731_058_578_630_004_9).abs() < 1e-15);
    }

    #[test]
    fn predict_uses_strict_inequality() {
        assert_eq!(predict(0.3), 1);
        assert_eq!(predict(-0.3), 0);
        assert_eq!(predict(0.0), 0);
    }

    #[test]
    fn bce_values() {
        assert!((bce_from_logits(&[0.0, 0.0, 0.0], &[1, 0, 1]).unwrap() - LN_2).abs() < 1e-15);
        // p(1) = 0.731058…, both terms equal −ln(0.731058…)
        let want = -(1.0 / (1.0 + (-1.0f64).exp())).ln();
        let got = bce_from_logits(&[1.0, -1.0], &[1, 0]).unwrap();
        assert!((got - want).abs() < 1e-15);
        assert!((got - 0.313_261_687_518_222_8).abs() < 1e-12);
        // perfect-fit limit
        assert!(bce_from_logits(&[60.0, -60.0], &[1, 0]).unwrap() < 1e-11);
    }

    #[test]
    fn bce_errors() {
        assert!(matches!(bce_from_logits(&[], &[]), Err(Error::Validation(_))));
        assert!(matches!(bce_from_logits(&[0.0], &[2]), Err(Error::Validation(_))));
        let cfg = CircuitConfig::without_embedding(2, 1).unwrap();
        let x = Array2::<f64>::zeros((0, 2));
        assert!(matches!(bce_cost(&AnsatzParams::zeros(1, 2), x.view(), &[], &cfg), Err(Error::Validation(_))));
    }

    #[test]
    fn bce_cost_with_zero_logits_is_ln2() {
        // RY(π/2)-equivalent: θ = π/2 in the middle slot of Rot puts wire 0 on the equator
        let cfg = CircuitConfig::without_embedding(1, 1).unwrap();
        let mut p = AnsatzParams::zeros(1, 1);
        p.as_array_mut()[[0, 0, 1]] = std::f64::consts::FRAC_PI_2;
        let x = Array2::<f64>::zeros((3, 1));
        let c = bce_cost(&p, x.view(), &[0, 1, 1], &cfg).unwrap();
        assert!((c - LN_2).abs() < 1e-15);
    }
}
