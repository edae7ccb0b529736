//! Pairwise distances and exact k-nearest-neighbor search.

use super::matrix::{sq_dist, Matrix};
use crate::error::{Error, Result};

/// Full matrix of squared Euclidean distances between rows of `x`.
///
/// Each unordered pair is computed once, so the result is exactly symmetric
/// with an exactly zero diagonal.
pub fn pairwise_sq_dists(x: &Matrix) -> Matrix {
    let n = x.rows();
    let mut d = Matrix::zeros(n, n);
    for i in 0..n {
        let ri = x.row(i);
        for j in (i + 1)..n {
            let v = sq_dist(ri, x.row(j));
            d.set(i, j, v);
            d.set(j, i, v);
        }
    }
    d
}

/// Indices of the `k` nearest other rows for every row of `x`, by Euclidean
/// distance, nearest first. Ties break toward the smaller row index.
pub fn knn(x: &Matrix, k: usize) -> Result<Vec<Vec<usize>>> {
    let n = x.rows();
    if k == 0 || k >= n {
        return Err(Error::Param(format!(
            "k = {k} out of range 1..{n} for {n} rows"
        )));
    }
    let mut result = Vec::with_capacity(n);
    let mut scratch: Vec<(f64, usize)> = Vec::with_capacity(n - 1);
    for i in 0..n {
        scratch.clear();
        let ri = x.row(i);
        for j in 0..n {
            if j != i {
                scratch.push((sq_dist(ri, x.row(j)), j));
            }
        }
        // Distances are finite, so total order on (distance, index) holds.
        scratch.sort_by(|a, b| a.partial_cmp(b).unwrap());
        result.push(scratch.iter().take(k).map(|&(_, j)| j).collect());
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rng::Rng;

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
        let mut rng = Rng::new(seed);
        let data = (0..rows * cols).map(|_| rng.range_f64(-5.0, 5.0)).collect();
        Matrix::from_vec(rows, cols, data).unwrap()
    }

    #[test]
    fn two_points_1d() {
        let x = Matrix::from_vec(2, 1, vec![0.0, 3.0]).unwrap();
        let d = pairwise_sq_dists(&x);
        assert_eq!(d.as_slice(), &[0.0, 9.0, 9.0, 0.0]);
    }

    #[test]
    fn identical_rows_zero() {
        let x = Matrix::from_vec(3, 2, vec![1.0, 2.0, 1.0, 2.0, 1.0, 2.0]).unwrap();
        let d = pairwise_sq_dists(&x);
        assert!(d.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn matches_naive_double_loop() {
        let x = random_matrix(5, 3, 21);
        let d = pairwise_sq_dists(&x);
        for i in 0..5 {
            for j in 0..5 {
                let mut expect = 0.0;
                for c in 0..3 {
                    let diff = x.get(i, c) - x.get(j, c);
                    expect += diff * diff;
                }
                assert_eq!(d.get(i, j), expect);
            }
        }
    }

    #[test]
    fn triangle_inequality_on_roots() {
        let x = random_matrix(12, 4, 33);
        let d = pairwise_sq_dists(&x);
        for i in 0..12 {
            for j in 0..12 {
                for k in 0..12 {
                    let ij = d.get(i, j).sqrt();
                    let ik = d.get(i, k).sqrt();
                    let kj = d.get(k, j).sqrt();
                    assert!(ij <= ik + kj + 1e-12);
                }
            }
        }
    }

    #[test]
    fn knn_simple_1d() {
        let x = Matrix::from_vec(3, 1, vec![0.0, 1.0, 10.0]).unwrap();
        let nn = knn(&x, 1).unwrap();
        assert_eq!(nn, vec![vec![1], vec![0], vec![1]]);
    }

    #[test]
    fn knn_tie_break_lowest_index() {
        let x = Matrix::from_vec(4, 2, vec![3.0; 8]).unwrap();
        let nn = knn(&x, 2).unwrap();
        assert_eq!(nn[0], vec![1, 2]);
        assert_eq!(nn[1], vec![0, 2]);
        assert_eq!(nn[3], vec![0, 1]);
    }

    #[test]
    fn knn_matches_full_sort_oracle() {
        let x = random_matrix(20, 4, 99);
        let nn = knn(&x, 5).unwrap();
        for i in 0..20 {
            let mut all: Vec<(f64, usize)> = (0..20)
                .filter(|&j| j != i)
                .map(|j| (sq_dist(x.row(i), x.row(j)), j))
                .collect();
            all.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let expect: Vec<usize> = all.iter().take(5).map(|&(_, j)| j).collect();
            assert_eq!(nn[i], expect);
        }
    }

    #[test]
    fn knn_rejects_k_out_of_range() {
        let x = random_matrix(4, 2, 1);
        assert!(knn(&x, 0).is_err());
        assert!(knn(&x, 4).is_err());
    }
}
