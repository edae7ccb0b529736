//! Exact t-SNE with per-point Gaussian bandwidth calibration, early
//! exaggeration, and momentum gradient descent on Student-t affinities.
//!
//! The O(N^2) joint affinity matrix is stored as its strict upper triangle,
//! and each descent iteration walks unordered pairs twice: once for the
//! Student-t normalization constant, once for the gradient and the KL
//! divergence. Initialization and every other random choice come from the
//! seeded generator, so a run is fully determined by (data, config).

use super::embedding::Embedding;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::numerics::{sq_dist, Matrix, Rng};

/// Exact t-SNE hyperparameters. Defaults follow the conventions of the
/// standard reference implementation.
#[derive(Debug, Clone)]
pub struct TsneConfig {
    pub perplexity: f64,
    pub learning_rate: f64,
    pub momentum_early: f64,
    pub momentum_late: f64,
    /// Iteration at which momentum switches from early to late.
    pub momentum_switch_iter: usize,
    pub n_iter: usize,
    /// Multiplier applied to the affinities for the first
    /// `exaggeration_iters` iterations.
    pub exaggeration_factor: f64,
    pub exaggeration_iters: usize,
    pub seed: u64,
}

impl Default for TsneConfig {
    fn default() -> Self {
        Self {
            perplexity: 30.0,
            learning_rate: 200.0,
            momentum_early: 0.5,
            momentum_late: 0.8,
            momentum_switch_iter: 250,
            n_iter: 1000,
            exaggeration_factor: 12.0,
            exaggeration_iters: 250,
            seed: 0,
        }
    }
}

/// Outcome of the per-row bandwidth binary search.
#[derive(Debug, Clone, Copy)]
pub struct CalibrationReport {
    /// Largest |entropy - ln(perplexity)| over all rows, in nats.
    pub max_entropy_error: f64,
    /// Rows whose binary search stopped at the step bound instead of the
    /// entropy tolerance.
    pub rows_hit_step_bound: usize,
}

/// A finished t-SNE run.
#[derive(Debug, Clone)]
pub struct TsneRun {
    pub embedding: Embedding,
    /// KL divergence of the (unexaggerated) affinities after each iteration.
    pub kl_history: Vec<f64>,
    pub calibration: CalibrationReport,
}

const ENTROPY_TOL: f64 = 1e-5;
const MAX_SEARCH_STEPS: usize = 50;

/// Strict-upper-triangle index for pair (i, j), i < j, over n points.
#[inline]
fn tri(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

struct RowCalibration {
    beta: f64,
    /// Smallest squared distance in the row; the exponent shift.
    shift: f64,
    /// Normalization of the shifted kernel.
    z: f64,
}

/// Entropy (nats) and shifted normalization of a Gaussian row at precision
/// `beta`, over squared distances `d` (self excluded by the caller).
fn row_entropy(d: &[f64], shift: f64, beta: f64) -> (f64, f64) {
    let mut z = 0.0;
    let mut weighted = 0.0;
    for &dj in d {
        let e = (-beta * (dj - shift)).exp();
        z += e;
        weighted += e * (dj - shift);
    }
    (z.ln() + beta * weighted / z, z)
}

fn calibrate_row(d: &[f64], target_entropy: f64) -> (RowCalibration, f64, bool) {
    let shift = d.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut beta = 1.0;
    let mut lo = 0.0;
    let mut hi = f64::INFINITY;
    let (mut entropy, mut z) = row_entropy(d, shift, beta);
    let mut capped = true;
    for _ in 0..MAX_SEARCH_STEPS {
        let diff = entropy - target_entropy;
        if diff.abs() <= ENTROPY_TOL {
            capped = false;
            break;
        }
        if diff > 0.0 {
            // Entropy too high: sharpen the kernel.
            lo = beta;
            beta = if hi.is_finite() { (beta + hi) / 2.0 } else { beta * 2.0 };
        } else {
            hi = beta;
            beta = if lo > 0.0 { (beta + lo) / 2.0 } else { beta / 2.0 };
        }
        let (e, zz) = row_entropy(d, shift, beta);
        entropy = e;
        z = zz;
    }
    (
        RowCalibration { beta, shift, z },
        (entropy - target_entropy).abs(),
        capped,
    )
}

fn check_preconditions(n: usize, perplexity: f64) -> Result<()> {
    if n < 4 {
        return Err(Error::Param(format!("t-SNE needs at least 4 samples, got {n}")));
    }
    if !(perplexity > 1.0 && perplexity <= (n - 1) as f64) {
        return Err(Error::Param(format!(
            "perplexity {perplexity} not in (1, {}] for {n} samples",
            n - 1
        )));
    }
    Ok(())
}

/// Calibrate all rows and fold the conditionals into the symmetric joint
/// triangle `p_ij = (p_{j|i} + p_{i|j}) / 2N`.
fn affinity_triangle(x: &Matrix, perplexity: f64) -> Result<(Vec<f64>, CalibrationReport)> {
    let n = x.rows();
    check_preconditions(n, perplexity)?;
    let target = perplexity.ln();

    let mut rows = Vec::with_capacity(n);
    let mut max_err = 0.0f64;
    let mut capped_rows = 0;
    let mut d = vec![0.0; n];
    for i in 0..n {
        let xi = x.row(i);
        let mut m = 0;
        for j in 0..n {
            if j != i {
                d[m] = sq_dist(xi, x.row(j));
                m += 1;
            }
        }
        let (cal, err, capped) = calibrate_row(&d[..n - 1], target);
        max_err = max_err.max(err);
        capped_rows += usize::from(capped);
        rows.push(cal);
    }

    let mut p = vec![0.0; n * (n - 1) / 2];
    let scale = 1.0 / (2.0 * n as f64);
    for i in 0..n {
        let xi = x.row(i);
        for j in (i + 1)..n {
            let dij = sq_dist(xi, x.row(j));
            let p_j_given_i = (-rows[i].beta * (dij - rows[i].shift)).exp() / rows[i].z;
            let p_i_given_j = (-rows[j].beta * (dij - rows[j].shift)).exp() / rows[j].z;
            p[tri(n, i, j)] = (p_j_given_i + p_i_given_j) * scale;
        }
    }

    Ok((
        p,
        CalibrationReport {
            max_entropy_error: max_err,
            rows_hit_step_bound: capped_rows,
        },
    ))
}

/// The symmetric joint affinity matrix (zero diagonal) used by t-SNE,
/// exposed for diagnostics: non-negative, symmetric, sums to 1.
pub fn joint_affinities(x: &Matrix, perplexity: f64) -> Result<(Matrix, CalibrationReport)> {
    let (p, report) = affinity_triangle(x, perplexity)?;
    let n = x.rows();
    let mut full = Matrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = p[tri(n, i, j)];
            full.set(i, j, v);
            full.set(j, i, v);
        }
    }
    Ok((full, report))
}

/// Run exact t-SNE on a dataset.
pub fn tsne_project(d: &Dataset, cfg: &TsneConfig) -> Result<TsneRun> {
    let x = &d.features;
    let n = x.rows();
    if cfg.n_iter < 1 {
        return Err(Error::Param("n_iter must be at least 1".into()));
    }
    let (p, calibration) = affinity_triangle(x, cfg.perplexity)?;

    // Seeded Gaussian initialization, sigma = 1e-4.
    let mut rng = Rng::new(cfg.seed);
    let mut y: Vec<f64> = (0..2 * n).map(|_| rng.gaussian(0.0, 1e-4)).collect();
    let mut velocity = vec![0.0; 2 * n];
    let mut grad = vec![0.0; 2 * n];
    let mut kl_history = Vec::with_capacity(cfg.n_iter);

    for iter in 0..cfg.n_iter {
        let exaggeration = if iter < cfg.exaggeration_iters {
            cfg.exaggeration_factor
        } else {
            1.0
        };
        let momentum = if iter < cfg.momentum_switch_iter {
            cfg.momentum_early
        } else {
            cfg.momentum_late
        };

        // Pass 1: Student-t normalization over unordered pairs.
        let mut sum_num = 0.0;
        for i in 0..n {
            let (yi0, yi1) = (y[2 * i], y[2 * i + 1]);
            for j in (i + 1)..n {
                let dx = yi0 - y[2 * j];
                let dy = yi1 - y[2 * j + 1];
                sum_num += 1.0 / (1.0 + dx * dx + dy * dy);
            }
        }
        sum_num *= 2.0;

        // Pass 2: gradient of the (exaggerated) KL and the true KL.
        grad.fill(0.0);
        let mut kl = 0.0;
        let mut base = 0;
        for i in 0..n {
            let (yi0, yi1) = (y[2 * i], y[2 * i + 1]);
            let p_row = &p[base..base + (n - 1 - i)];
            for (off, &pij) in p_row.iter().enumerate() {
                let j = i + 1 + off;
                let dx = yi0 - y[2 * j];
                let dy = yi1 - y[2 * j + 1];
                let num = 1.0 / (1.0 + dx * dx + dy * dy);
                let q = num / sum_num;
                let f = 4.0 * (exaggeration * pij - q) * num;
                grad[2 * i] += f * dx;
                grad[2 * i + 1] += f * dy;
                grad[2 * j] -= f * dx;
                grad[2 * j + 1] -= f * dy;
                if pij > 0.0 {
                    kl += 2.0 * pij * (pij.ln() - q.ln());
                }
            }
            base += n - 1 - i;
        }

        if !kl.is_finite() {
            return Err(Error::Divergence {
                unit: "iteration",
                index: iter,
                msg: "KL divergence became non-finite".into(),
            });
        }

        let mut mean = [0.0, 0.0];
        for i in 0..n {
            for c in 0..2 {
                let idx = 2 * i + c;
                velocity[idx] = momentum * velocity[idx] - cfg.learning_rate * grad[idx];
                y[idx] += velocity[idx];
                mean[c] += y[idx];
            }
        }
        mean[0] /= n as f64;
        mean[1] /= n as f64;
        for i in 0..n {
            y[2 * i] -= mean[0];
            y[2 * i + 1] -= mean[1];
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence {
                unit: "iteration",
                index: iter,
                msg: "embedding coordinates became non-finite".into(),
            });
        }
        kl_history.push(kl);
    }

    let embedding = Embedding::new(Matrix::from_vec(n, 2, y)?)?;
    Ok(TsneRun {
        embedding,
        kl_history,
        calibration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::make_blobs;
    use crate::numerics::Rng;

    #[test]
    fn tri_indexing_is_a_bijection() {
        let n = 9;
        let mut seen = vec![false; n * (n - 1) / 2];
        for i in 0..n {
            for j in (i + 1)..n {
                let idx = tri(n, i, j);
                assert!(!seen[idx]);
                seen[idx] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn equidistant_points_calibrate_uniform() {
        // Rows of the identity are 31 pairwise-equidistant points; with
        // perplexity 30 every conditional is uniform, so every joint entry
        // is 1 / (N (N-1)).
        let n = 31;
        let x = Matrix::identity(n);
        let (p, report) = joint_affinities(&x, 30.0).unwrap();
        let expect = 1.0 / (n * (n - 1)) as f64;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    assert_eq!(p.get(i, j), 0.0);
                } else {
                    assert!((p.get(i, j) - expect).abs() < 1e-12);
                }
            }
        }
        assert!(report.max_entropy_error <= ENTROPY_TOL);
    }

    #[test]
    fn affinities_symmetric_nonnegative_sum_to_one() {
        let mut rng = Rng::new(70);
        let n = 40;
        let data: Vec<f64> = (0..n * 6).map(|_| rng.gaussian(0.0, 1.0)).collect();
        let x = Matrix::from_vec(n, 6, data).unwrap();
        let (p, report) = joint_affinities(&x, 12.0).unwrap();
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                let v = p.get(i, j);
                assert!(v >= 0.0);
                assert_eq!(v, p.get(j, i));
                total += v;
            }
        }
        assert!((total - 1.0).abs() < 1e-10, "affinity sum {total}");
        assert_eq!(report.rows_hit_step_bound, 0);
        assert!(report.max_entropy_error <= ENTROPY_TOL);
    }

    #[test]
    fn perplexity_bounds_enforced() {
        let x = Matrix::identity(10);
        let d = Dataset::new(x, None, None).unwrap();
        for perplexity in [1.0, 0.5, 9.5, 50.0] {
            let cfg = TsneConfig {
                perplexity,
                n_iter: 5,
                ..Default::default()
            };
            assert!(tsne_project(&d, &cfg).is_err(), "perplexity {perplexity}");
        }
        // N - 1 itself is allowed.
        let cfg = TsneConfig {
            perplexity: 9.0,
            n_iter: 5,
            ..Default::default()
        };
        let d2 = Dataset::new(Matrix::identity(10), None, None).unwrap();
        assert!(tsne_project(&d2, &cfg).is_ok());
    }

    #[test]
    fn too_few_samples_rejected() {
        let d = Dataset::new(Matrix::identity(3), None, None).unwrap();
        let cfg = TsneConfig {
            perplexity: 2.0,
            n_iter: 2,
            ..Default::default()
        };
        assert!(tsne_project(&d, &cfg).is_err());
    }

    #[test]
    fn separated_blobs_separate_in_embedding() {
        let d = make_blobs(2, 10, 5, 0.05, 8).unwrap();
        // Small N wants a small step: the 200 default is sized for thousands
        // of points.
        let cfg = TsneConfig {
            perplexity: 5.0,
            learning_rate: 10.0,
            n_iter: 500,
            exaggeration_iters: 100,
            momentum_switch_iter: 100,
            seed: 4,
            ..Default::default()
        };
        let run = tsne_project(&d, &cfg).unwrap();
        assert!(run.kl_history.last().unwrap() < &run.kl_history[0]);
        let summary = crate::metrics::kl_divergence_history(&run.kl_history).unwrap();
        assert!(summary.decreased);
        assert!(summary.min <= summary.final_);

        let y = &run.embedding.coords;
        let mut within: f64 = 0.0;
        for blob in 0..2 {
            for i in 0..10 {
                for j in 0..10 {
                    let a = blob * 10 + i;
                    let b = blob * 10 + j;
                    within = within.max(sq_dist(y.row(a), y.row(b)).sqrt());
                }
            }
        }
        let mut between = f64::INFINITY;
        for i in 0..10 {
            for j in 10..20 {
                between = between.min(sq_dist(y.row(i), y.row(j)).sqrt());
            }
        }
        assert!(
            between > 3.0 * within,
            "between {between:.3} vs within diameter {within:.3}"
        );
    }

    #[test]
    fn deterministic_per_seed() {
        let d = make_blobs(2, 8, 4, 0.2, 3).unwrap();
        let cfg = TsneConfig {
            perplexity: 4.0,
            n_iter: 50,
            seed: 12,
            ..Default::default()
        };
        let a = tsne_project(&d, &cfg).unwrap();
        let b = tsne_project(&d, &cfg).unwrap();
        assert_eq!(a.embedding.coords.as_slice(), b.embedding.coords.as_slice());
        assert_eq!(a.kl_history, b.kl_history);
    }
}
