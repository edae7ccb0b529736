//! Locally linear embedding.

use super::embedding::Embedding;
use super::mds::check_gram_cap;
use super::NeighborGraphConfig;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::numerics::{knn, sym_eigen, Matrix};

/// Per-point reconstruction weights over the k nearest neighbors.
/// Each row sums to 1; entries align with the returned neighbor lists.
pub fn reconstruction_weights(
    x: &Matrix,
    cfg: &NeighborGraphConfig,
) -> Result<(Vec<Vec<usize>>, Vec<Vec<f64>>)> {
    cfg.validate()?;
    let neighbors = knn(x, cfg.k)?;
    let k = cfg.k;
    let mut weights = Vec::with_capacity(x.rows());

    for (i, nbrs) in neighbors.iter().enumerate() {
        // Local Gram of neighbor offsets, regularized by its trace.
        let xi = x.row(i);
        let offsets: Vec<Vec<f64>> = nbrs
            .iter()
            .map(|&j| x.row(j).iter().zip(xi).map(|(a, b)| a - b).collect())
            .collect();
        let mut gram = vec![vec![0.0; k]; k];
        for a in 0..k {
            for b in a..k {
                let dot: f64 = offsets[a].iter().zip(&offsets[b]).map(|(x, y)| x * y).sum();
                gram[a][b] = dot;
                gram[b][a] = dot;
            }
        }
        let trace: f64 = (0..k).map(|a| gram[a][a]).sum();
        let reg = cfg.lle_regularization * if trace > 0.0 { trace } else { 1.0 };
        for (a, row) in gram.iter_mut().enumerate() {
            row[a] += reg;
        }

        // Solve G w = 1, then normalize to sum 1.
        let mut w = solve_linear(&mut gram, vec![1.0; k]).ok_or_else(|| {
            Error::Convergence(format!("singular local Gram at point {i} despite regularization"))
        })?;
        let sum: f64 = w.iter().sum();
        if sum == 0.0 {
            return Err(Error::Convergence(format!(
                "degenerate reconstruction weights at point {i}"
            )));
        }
        for v in &mut w {
            *v /= sum;
        }
        weights.push(w);
    }
    Ok((neighbors, weights))
}

/// Gaussian elimination with partial pivoting; consumes `a`.
fn solve_linear(a: &mut [Vec<f64>], mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&p, &q| a[p][col].abs().partial_cmp(&a[q][col].abs()).unwrap())?;
        if a[pivot][col] == 0.0 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                a[row][j] -= f * a[col][j];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for j in (row + 1)..n {
            acc -= a[row][j] * x[j];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Project a dataset with standard LLE: reconstruction weights, then the
/// eigenvectors of (I-W)^T (I-W) for the 2nd and 3rd smallest eigenvalues
/// (the constant eigenvector is skipped).
pub fn lle_project(d: &Dataset, cfg: &NeighborGraphConfig) -> Result<Embedding> {
    let x = &d.features;
    let n = x.rows();
    if cfg.k >= n {
        return Err(Error::Param(format!(
            "LLE needs k < N, got k = {} for N = {n}",
            cfg.k
        )));
    }
    check_gram_cap(n, "LLE")?;
    let (neighbors, weights) = reconstruction_weights(x, cfg)?;

    // M = (I - W)^T (I - W), accumulated dense and exactly symmetric.
    let mut m = Matrix::identity(n);
    for i in 0..n {
        for (a, &j) in neighbors[i].iter().enumerate() {
            let w = weights[i][a];
            m.set(i, j, m.get(i, j) - w);
            m.set(j, i, m.get(j, i) - w);
            for (b, &l) in neighbors[i].iter().enumerate() {
                let v = w * weights[i][b];
                if j <= l {
                    m.set(j, l, m.get(j, l) + v);
                    if j != l {
                        m.set(l, j, m.get(l, j) + v);
                    }
                }
            }
        }
    }

    // Smallest eigenvectors of M = largest of -M.
    let mut neg = m.clone();
    for v in neg.as_mut_slice() {
        *v = -*v;
    }
    let eig = sym_eigen(&neg, 3)?;
    let mut coords = Matrix::zeros(n, 2);
    for c in 0..2 {
        for i in 0..n {
            coords.set(i, c, eig.eigenvectors.get(i, c + 1));
        }
    }
    Embedding::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rng;

    fn random_dataset(n: usize, dims: usize, seed: u64) -> Dataset {
        let mut rng = Rng::new(seed);
        let data: Vec<f64> = (0..n * dims).map(|_| rng.range_f64(-3.0, 3.0)).collect();
        Dataset::new(Matrix::from_vec(n, dims, data).unwrap(), None, None).unwrap()
    }

    #[test]
    fn weight_rows_sum_to_one() {
        let d = random_dataset(25, 4, 17);
        let cfg = NeighborGraphConfig {
            k: 6,
            ..Default::default()
        };
        let (_, weights) = reconstruction_weights(&d.features, &cfg).unwrap();
        for row in &weights {
            let sum: f64 = row.iter().sum();
            assert!((sum - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn planar_data_reconstructs_exactly() {
        // Points on a 2D plane inside 5D: with enough neighbors every point
        // is an exact affine combination of its neighborhood.
        let mut rng = Rng::new(23);
        let n = 40;
        let mut data = Vec::with_capacity(n * 5);
        for _ in 0..n {
            let (u, v) = (rng.range_f64(-2.0, 2.0), rng.range_f64(-2.0, 2.0));
            // Fixed affine map from the plane into 5D.
            data.extend_from_slice(&[
                1.0 + u,
                2.0 - v,
                0.5 * u + 0.25 * v,
                u - v,
                3.0 + 0.1 * u + 0.9 * v,
            ]);
        }
        let x = Matrix::from_vec(n, 5, data).unwrap();
        // Near-zero regularization: exact local linearity should reconstruct
        // each point from its neighborhood almost exactly.
        let cfg = NeighborGraphConfig {
            k: 8,
            lle_regularization: 1e-9,
        };
        let (neighbors, weights) = reconstruction_weights(&x, &cfg).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for dim in 0..5 {
                let mut rec = 0.0;
                for (a, &j) in neighbors[i].iter().enumerate() {
                    rec += weights[i][a] * x.get(j, dim);
                }
                worst = worst.max((rec - x.get(i, dim)).abs());
            }
        }
        assert!(worst < 1e-6, "max reconstruction error {worst:.3e}");
    }

    #[test]
    fn embedding_matches_brute_force_eigen_oracle() {
        // The embedding axes must be the eigenvectors for the 2nd and 3rd
        // smallest eigenvalues of M. Oracle: inverse-ordering check through
        // the Rayleigh quotient plus residual of the eigen equation.
        let d = random_dataset(30, 3, 31);
        let cfg = NeighborGraphConfig {
            k: 5,
            ..Default::default()
        };
        let (neighbors, weights) = reconstruction_weights(&d.features, &cfg).unwrap();
        let n = 30;
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] += 1.0;
            for (a, &j) in neighbors[i].iter().enumerate() {
                m[i][j] -= weights[i][a];
                m[j][i] -= weights[i][a];
                for (b, &l) in neighbors[i].iter().enumerate() {
                    m[j][l] += weights[i][a] * weights[i][b];
                }
            }
        }
        let e = lle_project(&d, &cfg).unwrap();
        for axis in 0..2 {
            let v = e.coords.col(axis);
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            // Rayleigh quotient of the axis.
            let mut mv = vec![0.0; n];
            for i in 0..n {
                for j in 0..n {
                    mv[i] += m[i][j] * v[j];
                }
            }
            let lambda: f64 =
                v.iter().zip(&mv).map(|(a, b)| a * b).sum::<f64>() / (norm * norm);
            // Eigen residual ||Mv - lambda v||.
            let mut resid = 0.0f64;
            for i in 0..n {
                resid += (mv[i] - lambda * v[i]) * (mv[i] - lambda * v[i]);
            }
            assert!(
                resid.sqrt() / norm < 1e-7,
                "axis {axis} is not an eigenvector (residual {:.3e})",
                resid.sqrt() / norm
            );
            // Small eigenvalue: below the median diagonal of M.
            assert!(lambda >= -1e-10 && lambda < 1.0, "lambda = {lambda}");
        }
    }

    #[test]
    fn k_bounds_enforced() {
        let d = random_dataset(10, 3, 2);
        let too_small = NeighborGraphConfig {
            k: 1,
            ..Default::default()
        };
        assert!(lle_project(&d, &too_small).is_err());
        let too_big = NeighborGraphConfig {
            k: 10,
            ..Default::default()
        };
        assert!(lle_project(&d, &too_big).is_err());
    }
}
