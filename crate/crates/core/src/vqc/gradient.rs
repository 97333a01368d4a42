use std::f64::consts::FRAC_PI_2;

use ndarray::{Array3, ArrayView2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::circuit::{ring_range, AnsatzParams, CircuitConfig};
use super::cost::{bce_from_logits, probability};
use crate::error::{Error, Result};
use crate::qsim::{gates, Mat2, StateVector, C64};

/// How training differentiates the circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMethod {
    /// Two shifted evaluations (`±π/2`) per angle.
    #[default]
    ParameterShift,
    /// Reverse sweep over the gate list. Gives the same derivative as the
    /// shift rule at the cost of about three circuit passes per sample.
    Adjoint,
}

impl std::str::FromStr for GradientMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parameter_shift" | "parameter-shift" | "shift" => Ok(GradientMethod::ParameterShift),
            "adjoint" => Ok(GradientMethod::Adjoint),
            other => Err(Error::Validation(format!("unknown gradient method `{other}`"))),
        }
    }
}

/// Logit and `∂logit/∂θ` for every angle by the parameter-shift rule. The
/// state before each layer is shared by all shifts inside that layer.
pub(crate) fn shift_jacobian(config: &CircuitConfig, prepared: &StateVector, params: &AnsatzParams) -> (f64, Array3<f64>) {
    let (layers, wires) = (params.layers(), params.wires());
    let measure = config.measure_wire();
    let mut jac = Array3::zeros((layers, wires, 3));
    let mut prefix = prepared.clone();
    let mut shifted = params.clone();
    for l in 0..layers {
        for w in 0..wires {
            for k in 0..3 {
                let orig = params.as_array()[[l, w, k]];
                let mut eval = |delta: f64| {
                    shifted.as_array_mut()[[l, w, k]] = orig + delta;
                    let mut s = prefix.clone();
                    config.apply_layer(&mut s, &shifted, l);
                    config.run_layers(&mut s, &shifted, l + 1);
                    s.expectation_z_unchecked(measure)
                };
                let plus = eval(FRAC_PI_2);
                let minus = eval(-FRAC_PI_2);
                shifted.as_array_mut()[[l, w, k]] = orig;
                jac[[l, w, k]] = 0.5 * (plus - minus);
            }
        }
        config.apply_layer(&mut prefix, params, l);
    }
    (prefix.expectation_z_unchecked(measure), jac)
}

/// Logit and `∂logit/∂θ` by one reverse sweep: with `ψ` the state after a
/// rotation `exp(−iθP/2)` and `λ` the back-propagated `Z ψ_final`,
/// `∂⟨Z⟩/∂θ = Im⟨λ|P|ψ⟩`.
pub(crate) fn adjoint_jacobian(config: &CircuitConfig, prepared: &StateVector, params: &AnsatzParams) -> (f64, Array3<f64>) {
    let (layers, n) = (params.layers(), params.wires());
    let measure = config.measure_wire();
    let a = params.as_array();
    let mut psi = config.final_state_unchecked(prepared, params);
    let logit = psi.expectation_z_unchecked(measure);
    let mut lam = psi.clone();
    lam.apply_z_unchecked(measure);

    let (pz, py) = (gates::z(), gates::y());
    let mut jac = Array3::zeros((layers, n, 3));
    for l in (0..layers).rev() {
        let r = ring_range(l, n);
        if r > 0 {
            for w in (0..n).rev() {
                psi.cnot_unchecked(w, (w + r) % n);
                lam.cnot_unchecked(w, (w + r) % n);
            }
        }
        for w in (0..n).rev() {
            let (phi, theta, omega) = (a[[l, w, 0]], a[[l, w, 1]], a[[l, w, 2]]);
            // each generator is carried through the rotations applied after it,
            // so all three derivatives read off one overlap at the layer output
            let m = psi.local_overlap(&lam, w);
            let im = |p: &Mat2| {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..2 {
                    for j in 0..2 {
                        acc += p.0[i][j] * m.0[i][j];
                    }
                }
                acc.im
            };
            let rz_omega = gates::rz(omega);
            let outer = rz_omega.mul(&gates::ry(theta));
            jac[[l, w, 2]] = im(&pz);
            jac[[l, w, 1]] = im(&rz_omega.mul(&py).mul(&rz_omega.adjoint()));
            jac[[l, w, 0]] = im(&outer.mul(&pz).mul(&outer.adjoint()));
            let undo = gates::rot(phi, theta, omega).adjoint();
            psi.apply_mat2(&undo, w);
            lam.apply_mat2(&undo, w);
        }
    }
    (logit, jac)
}

/// Mean BCE and its gradient over prepared states. Per-sample work may run
/// in parallel; reductions happen in ascending sample order.
pub(crate) fn cost_and_grad_prepared(
    config: &CircuitConfig,
    prepared: &[StateVector],
    labels: &[u8],
    params: &AnsatzParams,
    method: GradientMethod,
) -> Result<(f64, Array3<f64>)> {
    config.check_params(params)?;
    if prepared.len() != labels.len() {
        return Err(Error::Shape(format!("{} samples with {} labels", prepared.len(), labels.len())));
    }
    let per_sample: Vec<(f64, Array3<f64>)> = prepared
        .par_iter()
        .map(|s| match method {
            GradientMethod::ParameterShift => shift_jacobian(config, s, params),
            GradientMethod::Adjoint => adjoint_jacobian(config, s, params),
        })
        .collect();
    let logits: Vec<f64> = per_sample.iter().map(|(z, _)| *z).collect();
    let cost = bce_from_logits(&logits, labels)?;
    let n = labels.len() as f64;
    let mut grad = Array3::zeros(params.as_array().raw_dim());
    for ((z, jac), &y) in per_sample.iter().zip(labels) {
        let dcost_dlogit = (probability(*z) - f64::from(y)) / n;
        grad.scaled_add(dcost_dlogit, jac);
    }
    Ok((cost, grad))
}

/// Logits over prepared states, in sample order.
#[cfg(test)]
pub(crate) fn logits_prepared(config: &CircuitConfig, prepared: &[StateVector], params: &AnsatzParams) -> Result<Vec<f64>> {
    config.check_params(params)?;
    Ok(prepared
        .par_iter()
        .map(|s| config.final_state_unchecked(s, params).expectation_z_unchecked(config.measure_wire()))
        .collect())
}

pub(crate) fn prepare_batch(config: &CircuitConfig, x: ArrayView2<f64>) -> Result<Vec<StateVector>> {
    let rows: Vec<_> = x.rows().into_iter().collect();
    rows.into_par_iter().map(|row| config.prepare(row)).collect()
}

fn grad_with(params: &AnsatzParams, x: ArrayView2<f64>, y: &[u8], config: &CircuitConfig, method: GradientMethod) -> Result<Array3<f64>> {
    if x.nrows() == 0 {
        return Err(Error::Validation("gradient of an empty batch".into()));
    }
    let prepared = prepare_batch(config, x)?;
    Ok(cost_and_grad_prepared(config, &prepared, y, params, method)?.1)
}

/// `∂BCE/∂θ` by the parameter-shift rule, chained through
/// `∂BCE/∂logit = (p − y)/N`.
pub fn param_shift_grad(params: &AnsatzParams, x: ArrayView2<f64>, y: &[u8], config: &CircuitConfig) -> Result<Array3<f64>> {
    grad_with(params, x, y, config, GradientMethod::ParameterShift)
}

/// `∂BCE/∂θ` by adjoint differentiation.
pub fn adjoint_grad(params: &AnsatzParams, x: ArrayView2<f64>, y: &[u8], config: &CircuitConfig) -> Result<Array3<f64>> {
    grad_with(params, x, y, config, GradientMethod::Adjoint)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::GateMatrix;
    use crate::vqc::bce_cost;
    use ndarray::{arr1, Array2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ry_only_logit_grad(theta: f64) -> f64 {
        // one wire, angles (0, θ, 0): Rot = RY(θ), ⟨Z⟩ = cos θ
        let cfg = CircuitConfig::without_embedding(1, 1).unwrap();
        let mut p = AnsatzParams::zeros(1, 1);
        p.as_array_mut()[[0, 0, 1]] = theta;
        let s = cfg.prepare(arr1(&[0.0]).view()).unwrap();
        shift_jacobian(&cfg, &s, &p).1[[0, 0, 1]]
    }

    #[test]
    fn single_ry_derivative_of_cosine() {
        assert!(ry_only_logit_grad(0.0).abs() < 1e-15);
        assert!((ry_only_logit_grad(std::f64::consts::FRAC_PI_2) + 1.0).abs() < 1e-15);
    }

    fn random_problem(seed: u64, n: usize, layers: usize, samples: usize) -> (CircuitConfig, AnsatzParams, Array2<f64>, Vec<u8>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Array2::from_shape_simple_fn((1 << n, 1 << n), || rng.random_range(-1.0..1.0));
        let u = GateMatrix::from_real(&crate::linalg::householder_qr(&a).unwrap().q).unwrap();
        let cfg = CircuitConfig::new(n, layers, u, 0).unwrap();
        let p = AnsatzParams::random_uniform(layers, n, &mut rng);
        let x = Array2::from_shape_simple_fn((samples, n), || rng.random_range(-2.0..2.0));
        let y = (0..samples).map(|_| rng.random_range(0..2u8)).collect();
        (cfg, p, x, y)
    }

    fn central_difference(cfg: &CircuitConfig, p: &AnsatzParams, x: &Array2<f64>, y: &[u8], h: f64) -> Array3<f64> {
        let mut g = Array3::zeros(p.as_array().raw_dim());
        for (idx, _) in p.as_array().indexed_iter() {
            let mut hi = p.clone();
            hi.as_array_mut()[idx] += h;
            let mut lo = p.clone();
            lo.as_array_mut()[idx] -= h;
            g[idx] = (bce_cost(&hi, x.view(), y, cfg).unwrap() - bce_cost(&lo, x.view(), y, cfg).unwrap()) / (2.0 * h);
        }
        g
    }

    #[test]
    fn shift_rule_matches_finite_differences() {
        for seed in 0..10 {
            let (cfg, p, x, y) = random_problem(seed, 4, 2, 3);
            let ps = param_shift_grad(&p, x.view(), &y, &cfg).unwrap();
            let fd = central_difference(&cfg, &p, &x, &y, 1e-5);
            let err = (&ps - &fd).iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(err < 1e-5, "max err {err}");
        }
    }

    #[test]
    fn adjoint_equals_shift_rule() {
        for seed in 10..14 {
            let (cfg, p, x, y) = random_problem(seed, 4, 3, 3);
            let ps = param_shift_grad(&p, x.view(), &y, &cfg).unwrap();
            let adj = adjoint_grad(&p, x.view(), &y, &cfg).unwrap();
            let err = (&ps - &adj).iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(err < 1e-12, "max err {err}");
        }
    }

    #[test]
    fn single_wire_circuits_differentiate_without_rings() {
        let (cfg, p, x, y) = random_problem(99, 1, 3, 2);
        let ps = param_shift_grad(&p, x.view(), &y, &cfg).unwrap();
        let adj = adjoint_grad(&p, x.view(), &y, &cfg).unwrap();
        assert!((&ps - &adj).iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn empty_batch_is_rejected() {
        let cfg = CircuitConfig::without_embedding(2, 1).unwrap();
        let x = Array2::<f64>::zeros((0, 2));
        assert!(param_shift_grad(&AnsatzParams::zeros(1, 2), x.view(), &[], &cfg).is_err());
    }
}
