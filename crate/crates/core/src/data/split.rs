//! Seeded train / validation / test partitioning.

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::numerics::Rng;

/// Seeded partition: `train_fraction` of the rows form the training subset,
/// of which `validation_fraction` is carved off for early stopping; the rest
/// is held out as the test set.
#[derive(Debug, Clone, Copy)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub validation_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_fraction: 0.8,
            validation_fraction: 0.1,
            seed: 0,
        }
    }
}

/// Shuffled row indices split into (train, validation, test) blocks.
/// Exposed so callers can align per-row side data with the datasets.
pub fn split_indices(
    n: usize,
    spec: &SplitSpec,
) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(Error::Param(format!(
            "train_fraction {} not in (0, 1)",
            spec.train_fraction
        )));
    }
    if !(0.0..1.0).contains(&spec.validation_fraction) {
        return Err(Error::Param(format!(
            "validation_fraction {} not in [0, 1)",
            spec.validation_fraction
        )));
    }
    let n_selected = ((n as f64) * spec.train_fraction).round() as usize;
    let n_val = ((n_selected as f64) * spec.validation_fraction).round() as usize;
    let n_train = n_selected.saturating_sub(n_val);
    let n_test = n - n_selected.min(n);
    if n_train == 0 {
        return Err(Error::Param("split leaves an empty training set".into()));
    }
    if n_val == 0 && spec.validation_fraction > 0.0 {
        return Err(Error::Param("split leaves an empty validation set".into()));
    }
    if n_test == 0 {
        return Err(Error::Param("split leaves an empty test set".into()));
    }

    let mut indices: Vec<usize> = (0..n).collect();
    Rng::new(spec.seed).shuffle(&mut indices);
    let train = indices[..n_train].to_vec();
    let val = indices[n_train..n_selected].to_vec();
    let test = indices[n_selected..].to_vec();
    Ok((train, val, test))
}

/// Split a dataset into (train, validation, test).
///
/// Same seed, same partition; the parts are disjoint and cover the input.
/// The validation part may be empty when `validation_fraction` is zero.
pub fn split(d: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset, Dataset)> {
    let (train, val, test) = split_indices(d.n_samples(), spec)?;
    Ok((d.select(&train), d.select(&val), d.select(&test)))
}

/// Seeded two-way split with no held-out part, for data that is already a
/// training subset (fine-tuning samples, epoch sweeps).
pub fn split_train_val(d: &Dataset, val_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(val_fraction > 0.0 && val_fraction < 1.0) {
        return Err(Error::Param(format!(
            "val_fraction {val_fraction} not in (0, 1)"
        )));
    }
    let n = d.n_samples();
    let n_val = ((n as f64) * val_fraction).round().max(1.0) as usize;
    if n_val >= n {
        return Err(Error::Param("split leaves an empty training set".into()));
    }
    let mut indices: Vec<usize> = (0..n).collect();
    Rng::new(seed).shuffle(&mut indices);
    Ok((
        d.select(&indices[..n - n_val]),
        d.select(&indices[n - n_val..]),
    ))
}
