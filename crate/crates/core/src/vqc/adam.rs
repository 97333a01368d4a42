use ndarray::{Array3, Zip};

use crate::error::{Error, Result};

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPS: f64 = 1e-8;

/// First/second moment estimates and the step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub m: Array3<f64>,
    pub v: Array3<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(shape: (usize, usize, usize)) -> Self {
        AdamState { m: Array3::zeros(shape), v: Array3::zeros(shape), t: 0 }
    }

    /// One bias-corrected Adam update, `θ ← θ − lr·m̂/(√v̂ + ε)`.
    pub fn step(&mut self, params: &mut Array3<f64>, grad: &Array3<f64>, lr: f64) -> Result<()> {
        if params.shape() != grad.shape() || params.shape() != self.m.shape() {
            return Err(Error::Shape(format!(
                "adam: params {:?}, grad {:?}, state {:?}",
                params.shape(),
                grad.shape(),
                self.m.shape()
            )));
        }
        self.t += 1;
        let t = i32::try_from(self.t).unwrap_or(i32::MAX);
        let c1 = 1.0 - ADAM_BETA1.powi(t);
        let c2 = 1.0 - ADAM_BETA2.powi(t);
        Zip::from(params).and(&mut self.m).and(&mut self.v).and(grad).for_each(|p, m, v, &g| {
            *m = ADAM_BETA1 * *m + (1.0 - ADAM_BETA1) * g;
            *v = ADAM_BETA2 * *v + (1.0 - ADAM_BETA2) * g * g;
            *p -= lr * (*m / c1) / ((*v / c2).sqrt() + ADAM_EPS);
        });
        Ok(())
    }
}
