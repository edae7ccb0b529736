//! Synthetic Gaussian-cluster datasets.

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::numerics::{Matrix, Rng};

/// Gaussian clusters around seeded random centers, labels = class index.
///
/// Centers are drawn uniformly from `[0, 10)` per dimension; each sample is
/// its class center plus isotropic Gaussian noise with standard deviation
/// `spread`. Rows are ordered class by class.
pub fn make_blobs(
    n_classes: usize,
    samples_per_class: usize,
    dims: usize,
    spread: f64,
    seed: u64,
) -> Result<Dataset> {
    if n_classes == 0 || samples_per_class == 0 || dims == 0 {
        return Err(Error::Param(
            "n_classes, samples_per_class, and dims must all be at least 1".into(),
        ));
    }
    if !(spread >= 0.0) {
        return Err(Error::Param(format!("spread {spread} must be non-negative")));
    }
    let mut rng = Rng::new(seed);
    let centers: Vec<Vec<f64>> = (0..n_classes)
        .map(|_| (0..dims).map(|_| rng.range_f64(0.0, 10.0)).collect())
        .collect();

    let n = n_classes * samples_per_class;
    let mut data = Vec::with_capacity(n * dims);
    let mut labels = Vec::with_capacity(n);
    for (class, center) in centers.iter().enumerate() {
        for _ in 0..samples_per_class {
            for &c in center {
                data.push(c + rng.gaussian(0.0, spread));
            }
            labels.push(class as i64);
        }
    }
    Dataset::new(Matrix::from_vec(n, dims, data)?, Some(labels), None)
}
