//! Adam optimizer with bias correction.

use super::backward::Gradients;
use super::model::NetworkModel;
use crate::numerics::Matrix;

/// Adam hyperparameters; defaults are the published ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamParams {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamParams {
    fn default() -> Self {
        Self {
            learning_rate: 0.001,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// One Adam update on a flat parameter slice.
///
/// `t` is the 1-based step index; `m` and `v` are the running first and
/// second moment estimates, updated in place:
/// `m_hat = m / (1 - beta1^t)`, `v_hat = v / (1 - beta2^t)`,
/// `theta <- theta - lr * m_hat / (sqrt(v_hat) + eps)`.
pub fn adam_step(
    params: &mut [f64],
    grads: &[f64],
    m: &mut [f64],
    v: &mut [f64],
    t: usize,
    p: &AdamParams,
) {
    debug_assert!(t >= 1);
    debug_assert_eq!(params.len(), grads.len());
    let bc1 = 1.0 - p.beta1.powi(t as i32);
    let bc2 = 1.0 - p.beta2.powi(t as i32);
    for i in 0..params.len() {
        let g = grads[i];
        m[i] = p.beta1 * m[i] + (1.0 - p.beta1) * g;
        v[i] = p.beta2 * v[i] + (1.0 - p.beta2) * g * g;
        let m_hat = m[i] / bc1;
        let v_hat = v[i] / bc2;
        params[i] -= p.learning_rate * m_hat / (v_hat.sqrt() + p.epsilon);
    }
}

/// Moment estimates shaped like a model's parameters, plus the step count.
#[derive(Debug, Clone)]
pub struct AdamState {
    m_weights: Vec<Matrix>,
    v_weights: Vec<Matrix>,
    m_biases: Vec<Vec<f64>>,
    v_biases: Vec<Vec<f64>>,
    t: usize,
}

impl AdamState {
    pub fn new(model: &NetworkModel) -> Self {
        let zeros_w: Vec<Matrix> = model
            .weights
            .iter()
            .map(|w| Matrix::zeros(w.rows(), w.cols()))
            .collect();
        let zeros_b: Vec<Vec<f64>> = model.biases.iter().map(|b| vec![0.0; b.len()]).collect();
        Self {
            m_weights: zeros_w.clone(),
            v_weights: zeros_w,
            m_biases: zeros_b.clone(),
            v_biases: zeros_b,
            t: 0,
        }
    }

    /// Apply one optimizer step to every parameter of the model.
    pub fn step(&mut self, model: &mut NetworkModel, grads: &Gradients, p: &AdamParams) {
        self.t += 1;
        for l in 0..model.weights.len() {
            adam_step(
                model.weights[l].as_mut_slice(),
                grads.weights[l].as_slice(),
                self.m_weights[l].as_mut_slice(),
                self.v_weights[l].as_mut_slice(),
                self.t,
                p,
            );
            adam_step(
                &mut model.biases[l],
                &grads.biases[l],
                &mut self.m_biases[l],
                &mut self.v_biases[l],
                self.t,
                p,
            );
        }
    }
}
