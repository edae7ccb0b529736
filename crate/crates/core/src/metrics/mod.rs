//! Projection quality and stability measures.

use crate::data::Normalizer;
use crate::error::{Error, Result};
use crate::numerics::{knn, sq_dist, Matrix};
use crate::projections::Embedding;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// Neighborhood-hit report: how often a point's k nearest embedding
/// neighbors share its label. When two runs of the same data are being
/// compared, the displacement stats ride along.
#[derive(Debug, Clone)]
pub struct MetricReport {
    /// Mean of the per-point hit fractions, in [0, 1].
    pub neighborhood_hit: f64,
    pub k: usize,
    pub per_point: Vec<f64>,
    pub displacement: Option<DisplacementStats>,
}

impl MetricReport {
    /// Attach displacement stats from a paired stability comparison.
    pub fn with_displacement(mut self, stats: DisplacementStats) -> Self {
        self.displacement = Some(stats);
        self
    }

    /// Human-readable one-liner.
    pub fn summary(&self) -> String {
        let mut line = format!(
            "neighborhood hit (k={}): {:.4} over {} points",
            self.k,
            self.neighborhood_hit,
            self.per_point.len()
        );
        if let Some(d) = &self.displacement {
            line.push_str(&format!(
                "; displacement mean {:.6} max {:.6}",
                d.mean, d.max
            ));
        }
        line
    }

    /// Write `index,hit` rows plus the aggregate as CSV.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "index,hit")?;
        for (i, h) in self.per_point.iter().enumerate() {
            writeln!(w, "{i},{h}")?;
        }
        writeln!(w, "mean,{}", self.neighborhood_hit)?;
        if let Some(d) = &self.displacement {
            writeln!(w, "displacement_mean,{}", d.mean)?;
            writeln!(w, "displacement_max,{}", d.max)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Fraction of each point's `k` nearest embedding neighbors (Euclidean,
/// ties toward the smaller index, the point itself excluded) that share its
/// label, averaged over all points.
pub fn neighborhood_hit(e: &Embedding, labels: &[i64], k: usize) -> Result<MetricReport> {
    let n = e.len();
    if labels.len() != n {
        return Err(Error::Param(format!(
            "{} labels for {} embedded points",
            labels.len(),
            n
        )));
    }
    if k == 0 || k >= n {
        return Err(Error::Param(format!("k = {k} out of range 1..{n}")));
    }
    let neighbors = knn(&e.coords, k)?;
    let per_point: Vec<f64> = neighbors
        .iter()
        .enumerate()
        .map(|(i, nbrs)| {
            let hits = nbrs.iter().filter(|&&j| labels[j] == labels[i]).count();
            hits as f64 / k as f64
        })
        .collect();
    let mean = per_point.iter().sum::<f64>() / n as f64;
    Ok(MetricReport {
        neighborhood_hit: mean,
        k,
        per_point,
        displacement: None,
    })
}

/// Mean and maximum per-point displacement between two runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementStats {
    pub mean: f64,
    pub max: f64,
}

/// Euclidean displacement of shared points between two embeddings, measured
/// after min-max normalizing each embedding to [0, 1]^2 so that global
/// translation and scale differences do not count.
///
/// `shared` pairs an index in `e1` with the matching index in `e2`.
pub fn stability_displacement(
    e1: &Embedding,
    e2: &Embedding,
    shared: &[(usize, usize)],
) -> Result<DisplacementStats> {
    if shared.is_empty() {
        return Err(Error::Param("no shared points to compare".into()));
    }
    for &(a, b) in shared {
        if a >= e1.len() || b >= e2.len() {
            return Err(Error::Param(format!(
                "shared pair ({a}, {b}) out of range ({}, {})",
                e1.len(),
                e2.len()
            )));
        }
    }
    let n1 = Normalizer::fit(&e1.coords).apply(&e1.coords)?;
    let n2 = Normalizer::fit(&e2.coords).apply(&e2.coords)?;
    let mut sum = 0.0;
    let mut max: f64 = 0.0;
    for &(a, b) in shared {
        let d = sq_dist(n1.row(a), n2.row(b)).sqrt();
        sum += d;
        max = max.max(d);
    }
    Ok(DisplacementStats {
        mean: sum / shared.len() as f64,
        max,
    })
}

/// Start / end / minimum summary of a KL divergence trace.
#[derive(Debug, Clone, Copy)]
pub struct KlSummary {
    pub initial: f64,
    pub final_: f64,
    pub min: f64,
    /// True when the optimization ended below where it started.
    pub decreased: bool,
}

pub fn kl_divergence_history(history: &[f64]) -> Result<KlSummary> {
    let (first, last) = match (history.first(), history.last()) {
        (Some(f), Some(l)) => (*f, *l),
        _ => return Err(Error::Param("empty KL history".into())),
    };
    let min = history.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(KlSummary {
        initial: first,
        final_: last,
        min,
        decreased: last < first,
    })
}

/// Relative residual of the best similarity alignment (rotation or
/// reflection, uniform scale, translation) mapping `b` onto `a`:
/// `||a - s b R - t||_F^2 / ||a - mean(a)||_F^2`. Zero means the two point
/// sets agree up to a similarity transform; both must be N x 2.
pub fn procrustes_residual(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.rows() != b.rows() || a.cols() != 2 || b.cols() != 2 {
        return Err(Error::Shape(format!(
            "procrustes needs two Nx2 matrices, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let n = a.rows();
    if n == 0 {
        return Err(Error::Param("empty point sets".into()));
    }
    let mean = |m: &Matrix| -> [f64; 2] {
        let mut c = [0.0, 0.0];
        for i in 0..m.rows() {
            c[0] += m.get(i, 0);
            c[1] += m.get(i, 1);
        }
        [c[0] / m.rows() as f64, c[1] / m.rows() as f64]
    };
    let ca = mean(a);
    let cb = mean(b);

    // Cross-covariance M = sum (b_i - cb)(a_i - ca)^T and the norms.
    let mut m = [[0.0f64; 2]; 2];
    let mut norm_a = 0.0;
    let mut norm_b = 0.0;
    for i in 0..n {
        let pa = [a.get(i, 0) - ca[0], a.get(i, 1) - ca[1]];
        let pb = [b.get(i, 0) - cb[0], b.get(i, 1) - cb[1]];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] += pb[r] * pa[c];
            }
        }
        norm_a += pa[0] * pa[0] + pa[1] * pa[1];
        norm_b += pb[0] * pb[0] + pb[1] * pb[1];
    }
    if norm_a == 0.0 {
        // Degenerate target: identical constant point sets align exactly.
        return Ok(if norm_b == 0.0 { 0.0 } else { f64::INFINITY });
    }
    if norm_b == 0.0 {
        return Ok(1.0);
    }

    // Best orthogonal alignment over both rotations and reflections of the
    // 2x2 problem, in closed form. For a rotation by angle t the trace of
    // R M is maximized at sqrt((m00+m11)^2 + (m01-m10)^2); for a reflection,
    // at sqrt((m00-m11)^2 + (m01+m10)^2).
    let rot = ((m[0][0] + m[1][1]).powi(2) + (m[0][1] - m[1][0]).powi(2)).sqrt();
    let refl = ((m[0][0] - m[1][1]).powi(2) + (m[0][1] + m[1][0]).powi(2)).sqrt();
    let best = rot.max(refl);

    // Optimal scale s = best / ||b||^2; residual = ||a||^2 - best^2 / ||b||^2.
    let residual = (norm_a - best * best / norm_b).max(0.0);
    Ok(residual / norm_a)
}
