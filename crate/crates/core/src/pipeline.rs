//! End-to-end wiring: reference projection of the training subset, target
//! scaling, network training, fine-tuning.

use crate::data::{split, split_train_val, Dataset, Normalizer, SplitSpec};
use crate::error::{Error, Result};
use crate::nnp::{fine_tune, init_network, train, NetworkModel, TrainConfig, TrainReport};
use crate::projections::{project, Embedding, Method, ProjectionConfig};

/// Everything a finished training run produces.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub model: NetworkModel,
    pub report: TrainReport,
    /// The reference projection of the training subset (network-train rows
    /// first, then validation rows), in the technique's natural scale.
    pub reference: Embedding,
    pub train: Dataset,
    pub validation: Dataset,
    /// The held-out part the model never saw.
    pub test: Dataset,
}

/// Split, project the training subset with the chosen reference technique,
/// min-max both sides, and train a fresh network.
pub fn train_pipeline(
    d: &Dataset,
    method: Method,
    proj: &ProjectionConfig,
    split_spec: &SplitSpec,
    train_cfg: &TrainConfig,
) -> Result<PipelineRun> {
    if split_spec.validation_fraction == 0.0 {
        return Err(Error::Param(
            "early stopping needs a validation part; set validation_fraction > 0".into(),
        ));
    }
    let (train_part, val_part, test_part) = split(d, split_spec)?;
    let subset = train_part.concat(&val_part)?;
    let reference = project(&subset, method, proj)?;

    let n_train = train_part.n_samples();
    let (model, report) = fit_on_reference(
        init_network(d.n_features(), train_cfg.seed)?,
        &subset,
        &reference,
        n_train,
        method.name(),
        train_cfg,
        true,
    )?;

    Ok(PipelineRun {
        model,
        report,
        reference,
        train: train_part,
        validation: val_part,
        test: test_part,
    })
}

/// Train a fresh network on a dataset that is already a training subset
/// (no held-out part): project it, carve a validation fraction, fit.
pub fn train_on_subset(
    subset_all: &Dataset,
    method: Method,
    proj: &ProjectionConfig,
    val_fraction: f64,
    train_cfg: &TrainConfig,
) -> Result<(NetworkModel, TrainReport, Embedding)> {
    let (train_part, val_part) = split_train_val(subset_all, val_fraction, train_cfg.seed)?;
    let subset = train_part.concat(&val_part)?;
    let reference = project(&subset, method, proj)?;
    let (model, report) = fit_on_reference(
        init_network(subset.n_features(), train_cfg.seed)?,
        &subset,
        &reference,
        train_part.n_samples(),
        method.name(),
        train_cfg,
        true,
    )?;
    Ok((model, report, reference))
}

/// Fine-tuning output; there is no held-out part here.
#[derive(Debug, Clone)]
pub struct FinetuneRun {
    pub model: NetworkModel,
    pub report: TrainReport,
    pub reference: Embedding,
}

/// Continue training a loaded model on samples from a (possibly different)
/// data universe: project them with the reference technique, optionally
/// refit the target normalizer to the new projection's scale, and resume
/// with fresh optimizer moments.
pub fn finetune_pipeline(
    model: NetworkModel,
    new_data: &Dataset,
    method: Method,
    proj: &ProjectionConfig,
    val_fraction: f64,
    train_cfg: &TrainConfig,
    refit_target_norm: bool,
) -> Result<FinetuneRun> {
    if new_data.n_features() != model.n_input() {
        return Err(Error::Shape(format!(
            "model expects {} features, fine-tune data has {}",
            model.n_input(),
            new_data.n_features()
        )));
    }
    let (ft_train, ft_val) = split_train_val(new_data, val_fraction, train_cfg.seed)?;
    let subset = ft_train.concat(&ft_val)?;
    let reference = project(&subset, method, proj)?;

    let mut model = model;
    if refit_target_norm {
        model.target_norm = Normalizer::fit(&reference.coords);
    }
    let n_train = ft_train.n_samples();

    let input_x = model.input_norm.apply(&subset.features)?;
    let targets = model.target_norm.apply(&reference.coords)?;
    let (train_x, val_x) = split_rows(&input_x, n_train);
    let (train_y, val_y) = split_rows(&targets, n_train);

    let (model, report) = fine_tune(model, &train_x, &train_y, &val_x, &val_y, train_cfg)?;
    Ok(FinetuneRun {
        model,
        report,
        reference,
    })
}

/// Fit normalizers on the subset, scale, and train. `n_train` rows of the
/// subset feed gradient descent; the rest drive early stopping.
pub fn fit_on_reference(
    mut model: NetworkModel,
    subset: &Dataset,
    reference: &Embedding,
    n_train: usize,
    method_name: &str,
    train_cfg: &TrainConfig,
    scratch: bool,
) -> Result<(NetworkModel, TrainReport)> {
    model.input_norm = Normalizer::fit(&subset.features);
    model.target_norm = Normalizer::fit(&reference.coords);
    model.meta.projection = method_name.to_string();
    model.meta.seed = train_cfg.seed;

    let input_x = model.input_norm.apply(&subset.features)?;
    let targets = model.target_norm.apply(&reference.coords)?;
    let (train_x, val_x) = split_rows(&input_x, n_train);
    let (train_y, val_y) = split_rows(&targets, n_train);

    if scratch {
        train(model, &train_x, &train_y, &val_x, &val_y, train_cfg)
    } else {
        fine_tune(model, &train_x, &train_y, &val_x, &val_y, train_cfg)
    }
}

fn split_rows(m: &crate::numerics::Matrix, n_first: usize) -> (crate::numerics::Matrix, crate::numerics::Matrix) {
    let first: Vec<usize> = (0..n_first).collect();
    let rest: Vec<usize> = (n_first..m.rows()).collect();
    (m.select_rows(&first), m.select_rows(&rest))
}
