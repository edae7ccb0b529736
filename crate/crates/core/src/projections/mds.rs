//! Classical (Torgerson) multidimensional scaling.

use super::embedding::Embedding;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::numerics::{pairwise_sq_dists, sym_eigen, Matrix};

/// Largest N for which an N x N Gram matrix goes through the Jacobi
/// eigensolver in reasonable time. Larger inputs should be subsampled.
pub const GRAM_SIZE_CAP: usize = 4000;

pub(crate) fn check_gram_cap(n: usize, what: &str) -> Result<()> {
    if n > GRAM_SIZE_CAP {
        return Err(Error::Param(format!(
            "{what} builds an {n}x{n} Gram matrix; cap is {GRAM_SIZE_CAP} points - subsample first"
        )));
    }
    Ok(())
}

/// Classical MDS from a matrix of squared distances: double-center, take the
/// top-2 eigenpairs, scale eigenvectors by the square roots of their
/// eigenvalues (negative eigenvalues clamp to zero).
pub(crate) fn classical_mds_from_sq_dists(d2: &Matrix) -> Result<Embedding> {
    let n = d2.rows();
    let mut row_mean = vec![0.0; n];
    for i in 0..n {
        row_mean[i] = d2.row(i).iter().sum::<f64>() / n as f64;
    }
    let grand: f64 = row_mean.iter().sum::<f64>() / n as f64;

    // B = -1/2 J D2 J, built symmetric by construction.
    let mut b = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = -0.5 * (d2.get(i, j) - row_mean[i] - row_mean[j] + grand);
            b.set(i, j, v);
            b.set(j, i, v);
        }
    }

    let eig = sym_eigen(&b, 2)?;
    let mut coords = Matrix::zeros(n, 2);
    for c in 0..2 {
        let scale = eig.eigenvalues[c].max(0.0).sqrt();
        for i in 0..n {
            coords.set(i, c, eig.eigenvectors.get(i, c) * scale);
        }
    }
    Embedding::new(coords)
}

/// Project a dataset with classical MDS on Euclidean distances.
pub fn mds_project(d: &Dataset) -> Result<Embedding> {
    let n = d.n_samples();
    if n < 2 {
        return Err(Error::Param("MDS needs at least 2 samples".into()));
    }
    check_gram_cap(n, "MDS")?;
    classical_mds_from_sq_dists(&pairwise_sq_dists(&d.features))
}
