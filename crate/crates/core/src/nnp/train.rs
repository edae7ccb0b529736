//! Mini-batch Adam training with early stopping, plus inference and
//! fine-tuning.

use super::adam::{AdamParams, AdamState};
use super::backward::backward;
use super::loss::{loss, LossKind};
use super::model::NetworkModel;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::numerics::{Matrix, Rng};
use crate::projections::Embedding;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// Training hyperparameters. The defaults are the toolkit presets: up to 200
/// epochs, stop at validation loss 0.005 or after 10 epochs without
/// improvement beyond 1e-5.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub max_epochs: usize,
    pub target_loss: f64,
    pub patience: usize,
    pub min_delta: f64,
    pub batch_size: usize,
    pub adam: AdamParams,
    pub loss: LossKind,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            max_epochs: 200,
            target_loss: 0.005,
            patience: 10,
            min_delta: 1e-5,
            batch_size: 32,
            adam: AdamParams::default(),
            loss: LossKind::Mse,
            seed: 0,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if self.target_loss <= 0.0 {
            return Err(Error::Param(format!(
                "target_loss must be positive, got {}",
                self.target_loss
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::Param("batch_size must be at least 1".into()));
        }
        Ok(())
    }
}

/// Why training stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Validation loss reached the preset target.
    TargetLossReached,
    /// No validation improvement beyond `min_delta` for `patience` epochs;
    /// the best-validation parameters were restored.
    PatienceExhausted,
    /// The epoch budget ran out.
    MaxEpochs,
}

impl StopReason {
    pub fn name(&self) -> &'static str {
        match self {
            StopReason::TargetLossReached => "target-loss-reached",
            StopReason::PatienceExhausted => "patience-exhausted",
            StopReason::MaxEpochs => "max-epochs",
        }
    }
}

/// Per-epoch loss history and the stopping verdict.
#[derive(Debug, Clone)]
pub struct TrainReport {
    pub train_loss: Vec<f64>,
    pub val_loss: Vec<f64>,
    pub stopped_epoch: usize,
    pub stop_reason: StopReason,
}

impl TrainReport {
    /// Write `epoch,train_loss,val_loss` rows.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "epoch,train_loss,val_loss")?;
        for (i, (t, v)) in self.train_loss.iter().zip(&self.val_loss).enumerate() {
            writeln!(w, "{},{},{}", i + 1, t, v)?;
        }
        writeln!(w, "# stopped_epoch={} reason={}", self.stopped_epoch, self.stop_reason.name())?;
        w.flush()?;
        Ok(())
    }
}

fn check_training_inputs(
    model: &NetworkModel,
    train_x: &Matrix,
    train_y: &Matrix,
    val_x: &Matrix,
    val_y: &Matrix,
) -> Result<()> {
    model.check_input(train_x)?;
    model.check_input(val_x)?;
    if train_x.rows() == 0 || val_x.rows() == 0 {
        return Err(Error::Param(
            "training and validation sets must be non-empty".into(),
        ));
    }
    for (x, y, what) in [(train_x, train_y, "training"), (val_x, val_y, "validation")] {
        if y.rows() != x.rows() || y.cols() != 2 {
            return Err(Error::Shape(format!(
                "{what} targets must be {}x2, got {}x{}",
                x.rows(),
                y.rows(),
                y.cols()
            )));
        }
        // Targets must already be min-max scaled for the sigmoid head.
        if y.as_slice().iter().any(|&v| !(-1e-9..=1.0 + 1e-9).contains(&v)) {
            return Err(Error::Param(format!(
                "{what} targets are not scaled to [0, 1]"
            )));
        }
    }
    Ok(())
}

/// Train a network to regress normalized 2D targets from normalized inputs.
///
/// Each epoch reshuffles the training rows with the config seed's stream,
/// runs mini-batch Adam, then evaluates both losses on the full sets.
/// Stopping: target validation loss reached, patience exhausted (best
/// parameters restored), or epoch budget spent — in that priority.
pub fn train(
    model: NetworkModel,
    train_x: &Matrix,
    train_y: &Matrix,
    val_x: &Matrix,
    val_y: &Matrix,
    cfg: &TrainConfig,
) -> Result<(NetworkModel, TrainReport)> {
    if cfg.max_epochs == 0 {
        return Err(Error::Param("max_epochs must be at least 1".into()));
    }
    train_loop(model, train_x, train_y, val_x, val_y, cfg)
}

/// Continue training an existing model on new data, with fresh optimizer
/// moments. Zero `max_epochs` is allowed and returns the model unchanged
/// (aside from being marked as fine-tuned).
pub fn fine_tune(
    mut model: NetworkModel,
    train_x: &Matrix,
    train_y: &Matrix,
    val_x: &Matrix,
    val_y: &Matrix,
    cfg: &TrainConfig,
) -> Result<(NetworkModel, TrainReport)> {
    model.meta.fine_tuned = true;
    if cfg.max_epochs == 0 {
        let report = TrainReport {
            train_loss: Vec::new(),
            val_loss: Vec::new(),
            stopped_epoch: 0,
            stop_reason: StopReason::MaxEpochs,
        };
        return Ok((model, report));
    }
    train_loop(model, train_x, train_y, val_x, val_y, cfg)
}

fn train_loop(
    mut model: NetworkModel,
    train_x: &Matrix,
    train_y: &Matrix,
    val_x: &Matrix,
    val_y: &Matrix,
    cfg: &TrainConfig,
) -> Result<(NetworkModel, TrainReport)> {
    cfg.validate()?;
    check_training_inputs(&model, train_x, train_y, val_x, val_y)?;

    let n = train_x.rows();
    let mut rng = Rng::new(cfg.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut adam = AdamState::new(&model);

    let mut train_hist = Vec::new();
    let mut val_hist = Vec::new();
    // Exact best drives the parameter snapshot; the min_delta bar only
    // decides whether an epoch counts as progress for patience.
    let mut best_val = f64::INFINITY;
    let mut significant_bar = f64::INFINITY;
    let mut best_params: Option<(Vec<Matrix>, Vec<Vec<f64>>)> = None;
    let mut epochs_without_improvement = 0usize;
    let mut stop_reason = StopReason::MaxEpochs;

    for epoch in 1..=cfg.max_epochs {
        rng.shuffle(&mut order);
        for chunk in order.chunks(cfg.batch_size) {
            let xb = train_x.select_rows(chunk);
            let yb = train_y.select_rows(chunk);
            let (grads, batch_loss) = backward(&model, &xb, &yb, cfg.loss)?;
            if !batch_loss.is_finite() {
                return Err(Error::Divergence {
                    unit: "epoch",
                    index: epoch,
                    msg: "batch loss became non-finite".into(),
                });
            }
            adam.step(&mut model, &grads, &cfg.adam);
        }

        let epoch_train = loss(&model.forward(train_x)?, train_y, cfg.loss)?;
        let epoch_val = loss(&model.forward(val_x)?, val_y, cfg.loss)?;
        if !epoch_train.is_finite() || !epoch_val.is_finite() {
            return Err(Error::Divergence {
                unit: "epoch",
                index: epoch,
                msg: format!("loss became non-finite (train {epoch_train}, val {epoch_val})"),
            });
        }
        train_hist.push(epoch_train);
        val_hist.push(epoch_val);

        if epoch_val <= cfg.target_loss {
            stop_reason = StopReason::TargetLossReached;
            break;
        }
        if epoch_val < best_val {
            best_val = epoch_val;
            best_params = Some((model.weights.clone(), model.biases.clone()));
        }
        if epoch_val < significant_bar - cfg.min_delta {
            significant_bar = epoch_val;
            epochs_without_improvement = 0;
        } else {
            epochs_without_improvement += 1;
            if epochs_without_improvement >= cfg.patience {
                stop_reason = StopReason::PatienceExhausted;
                if let Some((w, b)) = best_params.take() {
                    model.weights = w;
                    model.biases = b;
                }
                break;
            }
        }
    }

    let stopped_epoch = train_hist.len();
    model.meta.epochs += stopped_epoch as u64;
    Ok((
        model,
        TrainReport {
            train_loss: train_hist,
            val_loss: val_hist,
            stopped_epoch,
            stop_reason,
        },
    ))
}

/// Project a dataset with a trained model: apply the stored input
/// normalizer, run the forward pass, map nothing else. Row order in,
/// row order out; each row is independent, so appending data never moves
/// earlier points.
pub fn infer(model: &NetworkModel, d: &Dataset) -> Result<Embedding> {
    if d.n_features() != model.n_input() {
        return Err(Error::Shape(format!(
            "model expects {} features, dataset has {}",
            model.n_input(),
            d.n_features()
        )));
    }
    let normalized = model.input_norm.apply(&d.features)?;
    // Chunked forward keeps peak memory flat on large datasets.
    let mut coords = Matrix::zeros(d.n_samples(), 2);
    let chunk = 1024;
    let mut row = 0;
    while row < d.n_samples() {
        let hi = (row + chunk).min(d.n_samples());
        let idx: Vec<usize> = (row..hi).collect();
        let out = model.forward(&normalized.select_rows(&idx))?;
        for (local, global) in (row..hi).enumerate() {
            coords.set(global, 0, out.get(local, 0));
            coords.set(global, 1, out.get(local, 1));
        }
        row = hi;
    }
    Embedding::new(coords)
}
