//! Per-column min-max scaling to [0, 1].

use crate::error::{Error, Result};
use crate::numerics::Matrix;
use serde::{Deserialize, Serialize};

/// Per-column minima and maxima, fitted once and stored with any model that
/// depends on them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

impl Normalizer {
    /// Fit column-wise minima and maxima.
    pub fn fit(data: &Matrix) -> Self {
        let cols = data.cols();
        let mut mins = vec![f64::INFINITY; cols];
        let mut maxs = vec![f64::NEG_INFINITY; cols];
        for i in 0..data.rows() {
            for (j, &v) in data.row(i).iter().enumerate() {
                if v < mins[j] {
                    mins[j] = v;
                }
                if v > maxs[j] {
                    maxs[j] = v;
                }
            }
        }
        Self { mins, maxs }
    }

    pub fn n_cols(&self) -> usize {
        self.mins.len()
    }

    /// Map each column to [0, 1] by `(v - min) / (max - min)`. Constant
    /// columns map to 0.5, keeping sigmoid regression targets away from the
    /// saturated ends. Values outside the fitted range extrapolate linearly.
    pub fn apply(&self, data: &Matrix) -> Result<Matrix> {
        self.check_cols(data)?;
        let mut out = data.clone();
        for i in 0..out.rows() {
            let row = out.row_mut(i);
            for (j, v) in row.iter_mut().enumerate() {
                let range = self.maxs[j] - self.mins[j];
                *v = if range == 0.0 {
                    0.5
                } else {
                    (*v - self.mins[j]) / range
                };
            }
        }
        Ok(out)
    }

    /// Inverse of [`apply`](Self::apply). Constant columns recover their
    /// fitted value.
    pub fn invert(&self, data: &Matrix) -> Result<Matrix> {
        self.check_cols(data)?;
        let mut out = data.clone();
        for i in 0..out.rows() {
            let row = out.row_mut(i);
            for (j, v) in row.iter_mut().enumerate() {
                let range = self.maxs[j] - self.mins[j];
                *v = if range == 0.0 {
                    self.mins[j]
                } else {
                    *v * range + self.mins[j]
                };
            }
        }
        Ok(out)
    }

    fn check_cols(&self, data: &Matrix) -> Result<()> {
        if data.cols() != self.n_cols() {
            return Err(Error::Shape(format!(
                "normalizer fitted on {} columns, data has {}",
                self.n_cols(),
                data.cols()
            )));
        }
        Ok(())
    }
}
