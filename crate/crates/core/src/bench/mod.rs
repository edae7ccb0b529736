//! Wall-clock timing harness: projection-vs-inference scaling runs and
//! epochs-to-convergence tables, reported as CSV.
//!
//! Timing uses the monotonic clock, discards one warm-up run, and reports
//! the median of the configured repetitions. Runs are strictly sequential.

use crate::data::{Dataset, Normalizer};
use crate::numerics::Rng;
use crate::error::{Error, Result};
use crate::nnp::{infer, NetworkModel, StopReason, TrainConfig};
use crate::nnp::init_network;
use crate::pipeline::{fit_on_reference, train_on_subset};
use crate::projections::{project, Method, ProjectionConfig, GRAM_SIZE_CAP};
use std::fs::OpenOptions;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

/// Pipeline stage a timing belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    ReferenceProjection,
    Training,
    Inference,
    EndToEnd,
}

impl Phase {
    pub fn name(&self) -> &'static str {
        match self {
            Phase::ReferenceProjection => "reference-projection",
            Phase::Training => "training",
            Phase::Inference => "inference",
            Phase::EndToEnd => "end-to-end",
        }
    }
}

/// One timed measurement. Seconds are wall clock and inherently
/// non-deterministic; everything else is reproducible from the seed.
#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub method: String,
    pub phase: Phase,
    pub n_samples: usize,
    pub n_dims: usize,
    pub seconds: f64,
    pub seed: u64,
}

/// A cell the suite chose not to run, and why.
#[derive(Debug, Clone)]
pub struct SkipNote {
    pub method: String,
    pub n_samples: usize,
    pub reason: String,
}

/// What to time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchMethod {
    /// A classical technique run from scratch at every size.
    Reference(Method),
    /// Inference with a network trained once on `train_size` samples.
    NnpInfer,
    /// The full pipeline (reference projection, training, inference) at
    /// every size, reported per phase plus end-to-end.
    NnpPipeline,
}

impl BenchMethod {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nnp" => Ok(BenchMethod::NnpPipeline),
            "nnp-infer" => Ok(BenchMethod::NnpInfer),
            other => Ok(BenchMethod::Reference(Method::parse(other)?)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BenchMethod::Reference(m) => m.name(),
            BenchMethod::NnpInfer => "nnp-infer",
            BenchMethod::NnpPipeline => "nnp",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScalingConfig {
    pub sizes: Vec<usize>,
    pub methods: Vec<BenchMethod>,
    /// Training-subset size for the NNP methods.
    pub train_size: usize,
    /// Reference technique the NNP mimics in this suite.
    pub nnp_reference: Method,
    pub projection: ProjectionConfig,
    pub train: TrainConfig,
    pub repetitions: usize,
    pub warmup: bool,
    pub seed: u64,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            sizes: vec![500, 1000],
            methods: vec![BenchMethod::Reference(Method::Tsne), BenchMethod::NnpInfer],
            train_size: 1000,
            nnp_reference: Method::Tsne,
            projection: ProjectionConfig::default(),
            train: TrainConfig::default(),
            repetitions: 3,
            warmup: true,
            seed: 0,
        }
    }
}

/// Scaling-suite output: the timings plus any skipped cells.
#[derive(Debug, Clone, Default)]
pub struct ScalingOutcome {
    pub records: Vec<BenchRecord>,
    pub skipped: Vec<SkipNote>,
}

/// Grow a dataset to `target` rows by duplicating seeded-random rows with
/// Gaussian jitter (sigma = 1e-3 of each feature's range). Labels follow
/// their source rows.
pub fn oversample(d: &Dataset, target: usize, seed: u64) -> Result<Dataset> {
    let n = d.n_samples();
    if target <= n {
        return Ok(d.clone());
    }
    let norm = Normalizer::fit(&d.features);
    let sigmas: Vec<f64> = norm
        .mins
        .iter()
        .zip(&norm.maxs)
        .map(|(lo, hi)| 1e-3 * (hi - lo))
        .collect();

    let mut features = d.features.as_slice().to_vec();
    let mut labels = d.labels.clone();
    let mut rng = Rng::new(seed);
    for _ in n..target {
        let src = rng.next_below(n as u64) as usize;
        for (j, &v) in d.features.row(src).iter().enumerate() {
            features.push(v + rng.gaussian(0.0, sigmas[j]));
        }
        if let Some(l) = labels.as_mut() {
            l.push(d.labels.as_ref().unwrap()[src]);
        }
    }
    Dataset::new(
        crate::numerics::Matrix::from_vec(target, d.n_features(), features)?,
        labels,
        d.feature_names.clone(),
    )
}

fn time_run<E>(mut f: impl FnMut() -> std::result::Result<(), E>) -> std::result::Result<f64, E> {
    let start = Instant::now();
    f()?;
    Ok(start.elapsed().as_secs_f64())
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs[xs.len() / 2]
}

/// Time every (method, size) cell. Cells a method cannot run (Gram-matrix
/// cap, projector preconditions) are skipped with the reason recorded.
pub fn run_scaling_suite(data: &Dataset, cfg: &ScalingConfig) -> Result<ScalingOutcome> {
    if cfg.sizes.is_empty() || cfg.methods.is_empty() {
        return Err(Error::Param("need at least one size and one method".into()));
    }
    if cfg.repetitions == 0 {
        return Err(Error::Param("repetitions must be at least 1".into()));
    }
    let needs_nnp = cfg
        .methods
        .iter()
        .any(|m| matches!(m, BenchMethod::NnpInfer | BenchMethod::NnpPipeline));
    let max_size = *cfg.sizes.iter().max().unwrap();
    let needed = max_size.max(if needs_nnp { cfg.train_size } else { 0 });
    let working = oversample(data, needed, cfg.seed)?;

    let mut order: Vec<usize> = (0..working.n_samples()).collect();
    Rng::new(cfg.seed).shuffle(&mut order);

    // One model trained up front for inference-only timing.
    let infer_model: Option<NetworkModel> = if cfg.methods.contains(&BenchMethod::NnpInfer) {
        let subset = working.select(&order[..cfg.train_size]);
        let (model, _, _) =
            train_on_subset(&subset, cfg.nnp_reference, &cfg.projection, 0.1, &cfg.train)?;
        Some(model)
    } else {
        None
    };

    let mut outcome = ScalingOutcome::default();
    let n_dims = working.n_features();

    for &size in &cfg.sizes {
        let subset = working.select(&order[..size]);
        for method in &cfg.methods {
            match method {
                BenchMethod::Reference(m) => {
                    if matches!(m, Method::Mds | Method::Isomap | Method::Lle)
                        && size > GRAM_SIZE_CAP
                    {
                        outcome.skipped.push(SkipNote {
                            method: m.name().into(),
                            n_samples: size,
                            reason: format!("size {size} above Gram cap {GRAM_SIZE_CAP}"),
                        });
                        continue;
                    }
                    let mut run = || project(&subset, *m, &cfg.projection).map(|_| ());
                    let timed = (|| -> Result<f64> {
                        if cfg.warmup {
                            run()?;
                        }
                        let mut times = Vec::with_capacity(cfg.repetitions);
                        for _ in 0..cfg.repetitions {
                            times.push(time_run(&mut run)?);
                        }
                        Ok(median(times))
                    })();
                    match timed {
                        Ok(seconds) => outcome.records.push(BenchRecord {
                            method: m.name().into(),
                            phase: Phase::EndToEnd,
                            n_samples: size,
                            n_dims,
                            seconds,
                            seed: cfg.seed,
                        }),
                        Err(e) => outcome.skipped.push(SkipNote {
                            method: m.name().into(),
                            n_samples: size,
                            reason: e.to_string(),
                        }),
                    }
                }
                BenchMethod::NnpInfer => {
                    let model = infer_model.as_ref().unwrap();
                    let mut run = || infer(model, &subset).map(|_| ());
                    if cfg.warmup {
                        run()?;
                    }
                    let mut times = Vec::with_capacity(cfg.repetitions);
                    for _ in 0..cfg.repetitions {
                        times.push(time_run(&mut run)?);
                    }
                    outcome.records.push(BenchRecord {
                        method: "nnp-infer".into(),
                        phase: Phase::Inference,
                        n_samples: size,
                        n_dims,
                        seconds: median(times),
                        seed: cfg.seed,
                    });
                }
                BenchMethod::NnpPipeline => {
                    let train_subset_data = working.select(&order[..cfg.train_size]);
                    let result = (|| -> Result<Vec<[f64; 3]>> {
                        let mut reps = Vec::with_capacity(cfg.repetitions);
                        for _ in 0..cfg.repetitions {
                            let (ft, fv) = crate::data::split_train_val(
                                &train_subset_data,
                                0.1,
                                cfg.train.seed,
                            )?;
                            let train_all = ft.concat(&fv)?;

                            let start = Instant::now();
                            let reference =
                                project(&train_all, cfg.nnp_reference, &cfg.projection)?;
                            let t_ref = start.elapsed().as_secs_f64();

                            let start = Instant::now();
                            let (model, _) = fit_on_reference(
                                init_network(train_all.n_features(), cfg.train.seed)?,
                                &train_all,
                                &reference,
                                ft.n_samples(),
                                cfg.nnp_reference.name(),
                                &cfg.train,
                                true,
                            )?;
                            let t_train = start.elapsed().as_secs_f64();

                            let start = Instant::now();
                            infer(&model, &subset)?;
                            let t_inf = start.elapsed().as_secs_f64();
                            reps.push([t_ref, t_train, t_inf]);
                        }
                        Ok(reps)
                    })();
                    match result {
                        Ok(reps) => {
                            // Report the repetition with the median total so
                            // the emitted phases stay additive.
                            let mut totals: Vec<(usize, f64)> = reps
                                .iter()
                                .enumerate()
                                .map(|(i, r)| (i, r.iter().sum()))
                                .collect();
                            totals.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
                            let (pick, total) = totals[totals.len() / 2];
                            let [t_ref, t_train, t_inf] = reps[pick];
                            for (phase, seconds) in [
                                (Phase::ReferenceProjection, t_ref),
                                (Phase::Training, t_train),
                                (Phase::Inference, t_inf),
                                (Phase::EndToEnd, total),
                            ] {
                                outcome.records.push(BenchRecord {
                                    method: "nnp".into(),
                                    phase,
                                    n_samples: size,
                                    n_dims,
                                    seconds,
                                    seed: cfg.seed,
                                });
                            }
                        }
                        Err(e) => outcome.skipped.push(SkipNote {
                            method: "nnp".into(),
                            n_samples: size,
                            reason: e.to_string(),
                        }),
                    }
                }
            }
        }
    }
    Ok(outcome)
}

/// Append records to a CSV file, writing the header only when the file is
/// new or empty.
pub fn write_records_csv(records: &[BenchRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let new_file = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = BufWriter::new(file);
    if new_file {
        writeln!(w, "method,phase,n_samples,n_dims,seconds,seed")?;
    }
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.method,
            r.phase.name(),
            r.n_samples,
            r.n_dims,
            r.seconds,
            r.seed
        )?;
    }
    w.flush()?;
    Ok(())
}

/// One cell of the epochs-to-convergence table.
#[derive(Debug, Clone)]
pub struct EpochsCell {
    pub classes: usize,
    pub samples: usize,
    pub epochs: Option<usize>,
    pub stop_reason: Option<StopReason>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct EpochsTable {
    pub cells: Vec<EpochsCell>,
}

impl EpochsTable {
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "classes,samples,epochs,stop_reason,error")?;
        for c in &self.cells {
            writeln!(
                w,
                "{},{},{},{},{}",
                c.classes,
                c.samples,
                c.epochs.map_or(String::new(), |e| e.to_string()),
                c.stop_reason.map_or("", |r| r.name()),
                c.error.as_deref().unwrap_or("")
            )?;
        }
        w.flush()?;
        Ok(())
    }
}

/// For each (class count, sample count) cell: restrict the dataset to its
/// first `classes` labels, draw `samples` rows, train against the chosen
/// reference with the given target loss, and record the stopping epoch.
/// Per-cell failures are recorded and the sweep continues.
pub fn epochs_table(
    data: &Dataset,
    class_counts: &[usize],
    sample_counts: &[usize],
    method: Method,
    proj: &ProjectionConfig,
    train_cfg: &TrainConfig,
) -> Result<EpochsTable> {
    let labels = data
        .labels
        .as_ref()
        .ok_or_else(|| Error::Param("epochs table needs a labeled dataset".into()))?;
    let distinct = data.distinct_labels();
    let mut table = EpochsTable::default();

    for &classes in class_counts {
        for &samples in sample_counts {
            let mut cell = EpochsCell {
                classes,
                samples,
                epochs: None,
                stop_reason: None,
                error: None,
            };
            let outcome = (|| -> Result<(usize, StopReason)> {
                if classes == 0 || classes > distinct.len() {
                    return Err(Error::Param(format!(
                        "{classes} classes requested, dataset has {}",
                        distinct.len()
                    )));
                }
                let wanted = &distinct[..classes];
                let rows: Vec<usize> = (0..data.n_samples())
                    .filter(|&i| wanted.contains(&labels[i]))
                    .collect();
                if rows.len() < samples {
                    return Err(Error::Param(format!(
                        "cell wants {samples} samples, only {} available",
                        rows.len()
                    )));
                }
                let mut rows = rows;
                Rng::new(train_cfg.seed ^ (classes as u64) << 32 ^ samples as u64)
                    .shuffle(&mut rows);
                let subset = data.select(&rows[..samples]);
                let (_, report, _) = train_on_subset(&subset, method, proj, 0.1, train_cfg)?;
                Ok((report.stopped_epoch, report.stop_reason))
            })();
            match outcome {
                Ok((epochs, reason)) => {
                    cell.epochs = Some(epochs);
                    cell.stop_reason = Some(reason);
                }
                Err(e) => cell.error = Some(e.to_string()),
            }
            table.cells.push(cell);
        }
    }
    Ok(table)
}
