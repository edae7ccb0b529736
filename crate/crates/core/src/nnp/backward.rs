//! Backpropagation through the ReLU trunk and sigmoid head.

use super::loss::{loss, loss_gradient, LossKind};
use super::model::NetworkModel;
use crate::error::Result;
use crate::numerics::Matrix;

/// Per-layer gradients, shaped exactly like the model parameters.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub weights: Vec<Matrix>,
    pub biases: Vec<Vec<f64>>,
}

/// Analytic gradients of the selected loss for one batch, plus the batch
/// loss itself. The ReLU subgradient at exactly zero is taken as zero.
pub fn backward(
    model: &NetworkModel,
    batch: &Matrix,
    targets: &Matrix,
    kind: LossKind,
) -> Result<(Gradients, f64)> {
    let activations = model.forward_cached(batch)?;
    let pred = activations.last().unwrap();
    let batch_loss = loss(pred, targets, kind)?;

    // Output delta: dL/dpred ⊙ sigmoid'(z), with sigmoid' = out (1 - out).
    let mut delta = loss_gradient(pred, targets, kind)?;
    for (d, &o) in delta.as_mut_slice().iter_mut().zip(pred.as_slice()) {
        *d *= o * (1.0 - o);
    }

    let n_layers = model.n_layers();
    let mut weight_grads = vec![Matrix::zeros(0, 0); n_layers];
    let mut bias_grads = vec![Vec::new(); n_layers];

    for l in (0..n_layers).rev() {
        let input_act = &activations[l];
        weight_grads[l] = input_act.matmul_transpose_a(&delta)?;
        let mut bg = vec![0.0; delta.cols()];
        for i in 0..delta.rows() {
            for (b, &d) in bg.iter_mut().zip(delta.row(i)) {
                *b += d;
            }
        }
        bias_grads[l] = bg;

        if l > 0 {
            // delta_prev = (delta W^T) ⊙ relu'(a), relu'(0) = 0.
            let mut prev = delta.matmul_transpose_b(&model.weights[l])?;
            for (p, &a) in prev.as_mut_slice().iter_mut().zip(input_act.as_slice()) {
                if a <= 0.0 {
                    *p = 0.0;
                }
            }
            delta = prev;
        }
    }

    Ok((
        Gradients {
            weights: weight_grads,
            biases: bias_grads,
        },
        batch_loss,
    ))
}
