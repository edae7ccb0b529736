//! The labeled feature table consumed by every projector and the network.

use crate::error::{Error, Result};
use crate::numerics::Matrix;

/// N samples of n features each, with optional integer labels.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub features: Matrix,
    pub labels: Option<Vec<i64>>,
    pub feature_names: Option<Vec<String>>,
}

impl Dataset {
    /// Validates the invariants: at least one row and column, finite
    /// features, and label/name lengths matching the feature shape.
    pub fn new(
        features: Matrix,
        labels: Option<Vec<i64>>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self> {
        if features.rows() == 0 || features.cols() == 0 {
            return Err(Error::Param(format!(
                "dataset must be non-empty, got {}x{}",
                features.rows(),
                features.cols()
            )));
        }
        if !features.all_finite() {
            return Err(Error::Param("dataset contains non-finite values".into()));
        }
        if let Some(l) = &labels {
            if l.len() != features.rows() {
                return Err(Error::Param(format!(
                    "{} labels for {} rows",
                    l.len(),
                    features.rows()
                )));
            }
        }
        if let Some(names) = &feature_names {
            if names.len() != features.cols() {
                return Err(Error::Param(format!(
                    "{} feature names for {} columns",
                    names.len(),
                    features.cols()
                )));
            }
        }
        Ok(Self {
            features,
            labels,
            feature_names,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.features.rows()
    }

    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    /// Sub-dataset holding the listed rows, in order.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            features: self.features.select_rows(indices),
            labels: self
                .labels
                .as_ref()
                .map(|l| indices.iter().map(|&i| l[i]).collect()),
            feature_names: self.feature_names.clone(),
        }
    }

    /// Concatenate rows of `other` below `self`. Labels survive only when
    /// both sides carry them.
    pub fn concat(&self, other: &Dataset) -> Result<Self> {
        let features = self.features.vstack(&other.features)?;
        let labels = match (&self.labels, &other.labels) {
            (Some(a), Some(b)) => {
                let mut l = a.clone();
                l.extend_from_slice(b);
                Some(l)
            }
            _ => None,
        };
        Ok(Self {
            features,
            labels,
            feature_names: self.feature_names.clone(),
        })
    }

    /// Distinct labels in ascending order; empty when unlabeled.
    pub fn distinct_labels(&self) -> Vec<i64> {
        let mut out: Vec<i64> = match &self.labels {
            Some(l) => l.clone(),
            None => return Vec::new(),
        };
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_label_length() {
        let m = Matrix::zeros(3, 2);
        assert!(Dataset::new(m.clone(), Some(vec![0, 1]), None).is_err());
        assert!(Dataset::new(m, Some(vec![0, 1, 0]), None).is_ok());
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(Dataset::new(Matrix::zeros(0, 2), None, None).is_err());
        let mut m = Matrix::zeros(2, 2);
        m.set(0, 0, f64::NAN);
        assert!(Dataset::new(m, None, None).is_err());
    }

    #[test]
    fn select_keeps_labels_aligned() {
        let m = Matrix::from_vec(3, 1, vec![10.0, 20.0, 30.0]).unwrap();
        let d = Dataset::new(m, Some(vec![1, 2, 3]), None).unwrap();
        let s = d.select(&[2, 0]);
        assert_eq!(s.features.as_slice(), &[30.0, 10.0]);
        assert_eq!(s.labels.unwrap(), vec![3, 1]);
    }
}
