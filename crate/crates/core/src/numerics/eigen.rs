//! Symmetric eigendecomposition via cyclic Jacobi rotations.
//!
//! Follows the classic Numerical Recipes scheme: sweeps of plane rotations
//! annihilate off-diagonal elements until their absolute sum vanishes,
//! accumulating the rotations into the eigenvector matrix. Robust for any
//! real symmetric matrix; cost is O(n^3) per sweep, which is why callers
//! that build N x N Gram matrices cap N.

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Top-k eigenpairs of a symmetric matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct SymEigenResult {
    /// Eigenvalues sorted by algebraic value, largest first.
    pub eigenvalues: Vec<f64>,
    /// `n x k` matrix whose columns are the matching orthonormal eigenvectors.
    pub eigenvectors: Matrix,
}

const MAX_SWEEPS: usize = 64;

/// Top-`k` eigenpairs of symmetric `a`, by algebraic value, descending.
///
/// The sign of each eigenvector is fixed so that its largest-magnitude
/// component (lowest index on ties) is positive.
pub fn sym_eigen(a: &Matrix, k: usize) -> Result<SymEigenResult> {
    let n = a.rows();
    if n == 0 || a.cols() != n {
        return Err(Error::Shape(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if a.asymmetry() > 1e-10 {
        return Err(Error::Shape(format!(
            "matrix is not symmetric (max |a_ij - a_ji| = {:.3e})",
            a.asymmetry()
        )));
    }
    if k == 0 || k > n {
        return Err(Error::Param(format!("k = {k} out of range 1..={n}")));
    }

    // Work on a unit-scaled copy so the stopping threshold is dimensionless.
    let scale = a.frobenius_norm();
    let mut w: Vec<f64> = a.as_slice().to_vec();
    if scale > 0.0 {
        for v in &mut w {
            *v /= scale;
        }
    }

    let mut vecs = Matrix::identity(n);
    let v = vecs.as_mut_slice();
    let mut diag: Vec<f64> = (0..n).map(|p| w[p * n + p]).collect();
    let mut accum = diag.clone();
    let mut pending = vec![0.0; n];

    let tol = (n * n) as f64 * 5e-16;
    let mut converged = false;

    for sweep in 0..MAX_SWEEPS {
        let mut off_sum = 0.0;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                off_sum += w[p * n + q].abs();
            }
        }
        if off_sum <= tol {
            converged = true;
            break;
        }
        // Threshold rotations during the first sweeps (Numerical Recipes).
        let tresh = if sweep < 3 {
            0.2 * off_sum / (n * n) as f64
        } else {
            0.0
        };

        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = w[p * n + q];
                let g = 100.0 * apq.abs();
                // Off-diagonal entry negligible against both diagonals: zero it.
                if sweep > 3 && diag[p].abs() + g == diag[p].abs() && diag[q].abs() + g == diag[q].abs()
                {
                    w[p * n + q] = 0.0;
                    w[q * n + p] = 0.0;
                    continue;
                }
                if apq.abs() <= tresh {
                    continue;
                }

                let h = diag[q] - diag[p];
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        t = -t;
                    }
                    t
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;

                pending[p] -= h;
                pending[q] += h;
                diag[p] -= h;
                diag[q] += h;
                w[p * n + q] = 0.0;
                w[q * n + p] = 0.0;

                let rotate = |w: &mut [f64], i: usize, j: usize| {
                    let g = w[i];
                    let h = w[j];
                    w[i] = g - s * (h + g * tau);
                    w[j] = h + s * (g - h * tau);
                };
                for j in 0..p {
                    rotate(&mut w, j * n + p, j * n + q);
                    w[p * n + j] = w[j * n + p];
                    w[q * n + j] = w[j * n + q];
                }
                for j in (p + 1)..q {
                    rotate(&mut w, p * n + j, j * n + q);
                    w[j * n + p] = w[p * n + j];
                    w[q * n + j] = w[j * n + q];
                }
                for j in (q + 1)..n {
                    rotate(&mut w, p * n + j, q * n + j);
                    w[j * n + p] = w[p * n + j];
                    w[j * n + q] = w[q * n + j];
                }
                for j in 0..n {
                    rotate(v, j * n + p, j * n + q);
                }
            }
        }

        for p in 0..n {
            accum[p] += pending[p];
            pending[p] = 0.0;
            diag[p] = accum[p];
        }
    }

    if !converged {
        return Err(Error::Convergence(format!(
            "Jacobi eigensolver did not converge within {MAX_SWEEPS} sweeps (n = {n})"
        )));
    }

    // Sort eigenpairs descending; stable so equal values keep rotation order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());

    let mut eigenvalues = Vec::with_capacity(k);
    let mut eigenvectors = Matrix::zeros(n, k);
    for (out_col, &src_col) in order.iter().take(k).enumerate() {
        eigenvalues.push(diag[src_col] * scale);
        let mut col: Vec<f64> = (0..n).map(|r| vecs.get(r, src_col)).collect();
        fix_sign(&mut col);
        for (r, &val) in col.iter().enumerate() {
            eigenvectors.set(r, out_col, val);
        }
    }

    Ok(SymEigenResult {
        eigenvalues,
        eigenvectors,
    })
}

/// Flip so the largest-magnitude component (lowest index on ties) is positive.
fn fix_sign(col: &mut [f64]) {
    let mut best = 0;
    for (i, v) in col.iter().enumerate() {
        if v.abs() > col[best].abs() {
            best = i;
        }
    }
    if col[best] < 0.0 {
        for v in col.iter_mut() {
            *v = -*v;
        }
    }
}
