//! Principal component analysis onto the top-2 covariance eigenvectors.

use super::embedding::Embedding;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::numerics::{sym_eigen, Matrix};

/// Fitted PCA basis, reusable for projecting further data.
#[derive(Debug, Clone)]
pub struct PcaModel {
    /// Per-feature mean of the fitting data.
    pub mean: Vec<f64>,
    /// `n x 2` matrix of principal directions (columns).
    pub components: Matrix,
    /// Variance along each principal direction.
    pub eigenvalues: [f64; 2],
}

impl PcaModel {
    /// Center with the stored mean and project onto the stored components.
    pub fn project(&self, features: &Matrix) -> Result<Embedding> {
        if features.cols() != self.mean.len() {
            return Err(Error::Shape(format!(
                "PCA fitted on {} features, data has {}",
                self.mean.len(),
                features.cols()
            )));
        }
        let n = features.rows();
        let mut coords = Matrix::zeros(n, 2);
        for i in 0..n {
            let row = features.row(i);
            for c in 0..2 {
                let mut acc = 0.0;
                for (j, &v) in row.iter().enumerate() {
                    acc += (v - self.mean[j]) * self.components.get(j, c);
                }
                coords.set(i, c, acc);
            }
        }
        Embedding::new(coords)
    }
}

/// Project a dataset onto its top-2 principal components.
pub fn pca_project(d: &Dataset) -> Result<(Embedding, PcaModel)> {
    let x = &d.features;
    let (n, m) = (x.rows(), x.cols());
    if n < 2 {
        return Err(Error::Param("PCA needs at least 2 samples".into()));
    }
    if m < 2 {
        return Err(Error::Param("PCA to 2D needs at least 2 features".into()));
    }

    let mut mean = vec![0.0; m];
    for i in 0..n {
        for (j, &v) in x.row(i).iter().enumerate() {
            mean[j] += v;
        }
    }
    for v in &mut mean {
        *v /= n as f64;
    }

    // Sample covariance, built symmetric by construction.
    let mut cov = Matrix::zeros(m, m);
    for i in 0..n {
        let row = x.row(i);
        for a in 0..m {
            let da = row[a] - mean[a];
            for b in a..m {
                let v = cov.get(a, b) + da * (row[b] - mean[b]);
                cov.set(a, b, v);
            }
        }
    }
    let denom = (n - 1) as f64;
    for a in 0..m {
        for b in a..m {
            let v = cov.get(a, b) / denom;
            cov.set(a, b, v);
            cov.set(b, a, v);
        }
    }

    let eig = sym_eigen(&cov, 2)?;
    let model = PcaModel {
        mean,
        components: eig.eigenvectors,
        eigenvalues: [eig.eigenvalues[0], eig.eigenvalues[1]],
    };
    let embedding = model.project(x)?;
    Ok((embedding, model))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rng;

    #[test]
    fn colinear_data_collapses_second_axis() {
        let n = 20;
        let mut data = Vec::new();
        for i in 0..n {
            let t = i as f64;
            data.push(t);
            data.push(t); // y = x
        }
        let d = Dataset::new(Matrix::from_vec(n, 2, data).unwrap(), None, None).unwrap();
        let (e, _) = pca_project(&d).unwrap();
        for i in 0..n {
            assert!(e.coords.get(i, 1).abs() < 1e-10);
        }
    }

    #[test]
    fn diagonal_covariance_recovers_centered_data() {
        // Data along the axes with variances 4 and 1: components are e1, e2.
        let pts = vec![
            2.0, 0.0, //
            -2.0, 0.0, //
            0.0, 1.0, //
            0.0, -1.0,
        ];
        let d = Dataset::new(Matrix::from_vec(4, 2, pts.clone()).unwrap(), None, None).unwrap();
        let (e, model) = pca_project(&d).unwrap();
        assert!(model.eigenvalues[0] > model.eigenvalues[1]);
        for i in 0..4 {
            // Mean is zero, so the embedding equals the data up to axis signs.
            assert!((e.coords.get(i, 0).abs() - pts[2 * i].abs()).abs() < 1e-12);
            assert!((e.coords.get(i, 1).abs() - pts[2 * i + 1].abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn axis_variance_matches_covariance_eigenvalues() {
        // Independent oracle: power iteration with deflation on the sample
        // covariance, checked against the projected variance per axis.
        let mut rng = Rng::new(61);
        let (n, m) = (50, 10);
        let data: Vec<f64> = (0..n * m).map(|_| rng.gaussian(0.0, 2.0)).collect();
        let d = Dataset::new(Matrix::from_vec(n, m, data).unwrap(), None, None).unwrap();
        let (e, _) = pca_project(&d).unwrap();

        // Covariance for the oracle.
        let x = &d.features;
        let mut mean = vec![0.0; m];
        for i in 0..n {
            for j in 0..m {
                mean[j] += x.get(i, j) / n as f64;
            }
        }
        let mut cov = vec![vec![0.0; m]; m];
        for i in 0..n {
            for a in 0..m {
                for b in 0..m {
                    cov[a][b] += (x.get(i, a) - mean[a]) * (x.get(i, b) - mean[b])
                        / (n as f64 - 1.0);
                }
            }
        }
        let oracle = power_iteration_top2(&cov);

        for axis in 0..2 {
            let col = e.coords.col(axis);
            let cm: f64 = col.iter().sum::<f64>() / n as f64;
            let var: f64 =
                col.iter().map(|v| (v - cm) * (v - cm)).sum::<f64>() / (n as f64 - 1.0);
            assert!(
                (var - oracle[axis]).abs() < 1e-8,
                "axis {axis}: var {var} vs oracle {}",
                oracle[axis]
            );
        }
    }

    /// Test-only oracle: top-2 eigenvalues by power iteration + deflation.
    fn power_iteration_top2(a: &[Vec<f64>]) -> [f64; 2] {
        let m = a.len();
        let mut work: Vec<Vec<f64>> = a.to_vec();
        let mut out = [0.0; 2];
        for comp in out.iter_mut() {
            let mut v: Vec<f64> = (0..m).map(|i| 1.0 / (i + 1) as f64).collect();
            let mut lambda = 0.0;
            for _ in 0..10_000 {
                let mut next = vec![0.0; m];
                for i in 0..m {
                    for j in 0..m {
                        next[i] += work[i][j] * v[j];
                    }
                }
                let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm == 0.0 {
                    break;
                }
                for x in &mut next {
                    *x /= norm;
                }
                lambda = norm;
                let delta: f64 = next
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| (a - b).abs().min((a + b).abs()))
                    .sum();
                v = next;
                if delta < 1e-14 {
                    break;
                }
            }
            *comp = lambda;
            for i in 0..m {
                for j in 0..m {
                    work[i][j] -= lambda * v[i] * v[j];
                }
            }
        }
        out
    }

    #[test]
    fn reusing_the_model_matches_fit_output() {
        let mut rng = Rng::new(3);
        let data: Vec<f64> = (0..60).map(|_| rng.range_f64(-1.0, 1.0)).collect();
        let d = Dataset::new(Matrix::from_vec(20, 3, data).unwrap(), None, None).unwrap();
        let (e, model) = pca_project(&d).unwrap();
        let again = model.project(&d.features).unwrap();
        assert_eq!(e.coords.as_slice(), again.coords.as_slice());
    }
}
