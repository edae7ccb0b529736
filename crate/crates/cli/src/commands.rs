//! Subcommand implementations.

use crate::args::*;
use crate::dataio::load_dataset;
use nnproj_core::bench::{epochs_table, run_scaling_suite, write_records_csv, BenchMethod, ScalingConfig};
use nnproj_core::data::{make_blobs, save_csv, Dataset, SplitSpec};
use nnproj_core::metrics::neighborhood_hit;
use nnproj_core::nnp::{infer, load_model, save_model, LossKind, TrainConfig};
use nnproj_core::pipeline::{finetune_pipeline, train_pipeline};
use nnproj_core::plot::{render_scatter, PlotSpec};
use nnproj_core::projections::{
    project, Embedding, Method, NeighborGraphConfig, ProjectionConfig, TsneConfig,
};
use nnproj_core::{Error, Result};
use std::fs;
use std::path::{Path, PathBuf};

fn ensure_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn projection_config(m: &MethodOpts, seed: u64) -> Result<(Method, ProjectionConfig)> {
    let method = Method::parse(&m.method)?;
    let cfg = ProjectionConfig {
        tsne: TsneConfig {
            perplexity: m.perplexity,
            n_iter: m.n_iter,
            seed,
            ..Default::default()
        },
        neighbors: NeighborGraphConfig {
            k: m.k,
            ..Default::default()
        },
    };
    Ok((method, cfg))
}

fn train_config(t: &TrainOpts, seed: u64) -> Result<TrainConfig> {
    Ok(TrainConfig {
        max_epochs: t.max_epochs,
        target_loss: t.target_loss,
        patience: t.patience,
        batch_size: t.batch_size,
        adam: nnproj_core::nnp::AdamParams {
            learning_rate: t.learning_rate,
            ..Default::default()
        },
        loss: LossKind::parse(&t.loss)?,
        seed,
        ..Default::default()
    })
}

fn report_nh(embedding: &Embedding, labels: &[i64], k: usize, out: &Path) -> Result<()> {
    let report = neighborhood_hit(embedding, labels, k)?;
    println!("{}", report.summary());
    fs::write(out, format!("{}\n", report.summary()))?;
    Ok(())
}

pub fn cmd_project(args: &ProjectArgs) -> Result<()> {
    let dataset = load_dataset(&args.data)?;
    let (method, cfg) = projection_config(&args.method, args.seed)?;
    let embedding = project(&dataset, method, &cfg)?;

    ensure_out_dir(&args.out_dir)?;
    let csv_path = args.out_dir.join("embedding.csv");
    embedding.write_csv(&csv_path, dataset.labels.as_deref())?;
    println!(
        "projected {} samples with {} -> {}",
        dataset.n_samples(),
        method,
        csv_path.display()
    );

    if let Some(labels) = &dataset.labels {
        report_nh(&embedding, labels, args.nh_k, &args.out_dir.join("metrics.txt"))?;
    }
    if args.plot {
        let svg = args.out_dir.join("embedding.svg");
        render_scatter(
            &embedding,
            dataset.labels.as_deref(),
            &PlotSpec::default(),
            &svg,
        )?;
        println!("wrote {}", svg.display());
    }
    Ok(())
}

pub fn cmd_train(args: &TrainArgs) -> Result<()> {
    let dataset = load_dataset(&args.data)?;
    let (method, proj_cfg) = projection_config(&args.method, args.seed)?;
    let train_cfg = train_config(&args.train, args.seed)?;
    let split_spec = SplitSpec {
        train_fraction: args.train_fraction,
        validation_fraction: args.val_fraction,
        seed: args.seed,
    };

    let run = train_pipeline(&dataset, method, &proj_cfg, &split_spec, &train_cfg)?;
    ensure_out_dir(&args.out_dir)?;

    run.report.write_csv(args.out_dir.join("train_report.csv"))?;
    let subset_labels: Option<Vec<i64>> = match (&run.train.labels, &run.validation.labels) {
        (Some(a), Some(b)) => {
            let mut l = a.clone();
            l.extend_from_slice(b);
            Some(l)
        }
        _ => None,
    };
    run.reference
        .write_csv(args.out_dir.join("reference.csv"), subset_labels.as_deref())?;

    let model_path = args.out_dir.join("model.nnpm");
    save_model(&run.model, &model_path)?;
    println!(
        "trained on {} samples ({} reference): stopped after {} epochs ({}), val loss {:.6}",
        run.train.n_samples() + run.validation.n_samples(),
        method,
        run.report.stopped_epoch,
        run.report.stop_reason.name(),
        run.report.val_loss.last().copied().unwrap_or(f64::NAN),
    );
    println!("wrote {}", model_path.display());
    Ok(())
}

pub fn cmd_infer(args: &InferArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let dataset = load_dataset(&args.data)?;
    let embedding = infer(&model, &dataset)?;

    ensure_out_dir(&args.out_dir)?;
    let csv_path = args.out_dir.join("embedding.csv");
    embedding.write_csv(&csv_path, dataset.labels.as_deref())?;
    println!(
        "inferred {} samples with model '{}' -> {}",
        dataset.n_samples(),
        model.meta.projection,
        csv_path.display()
    );
    if let Some(labels) = &dataset.labels {
        report_nh(&embedding, labels, args.nh_k, &args.out_dir.join("metrics.txt"))?;
    }
    Ok(())
}

pub fn cmd_finetune(args: &FinetuneArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let dataset = load_dataset(&args.data)?;
    let (method, proj_cfg) = projection_config(&args.method, args.seed)?;
    let train_cfg = train_config(&args.train, args.seed)?;

    let run = finetune_pipeline(
        model,
        &dataset,
        method,
        &proj_cfg,
        args.val_fraction,
        &train_cfg,
        !args.reuse_target_norm,
    )?;

    ensure_out_dir(&args.out_dir)?;
    run.report.write_csv(args.out_dir.join("train_report.csv"))?;
    let model_path = args.out_dir.join("model.nnpm");
    save_model(&run.model, &model_path)?;
    println!(
        "fine-tuned for {} epochs ({}); total epochs now {}",
        run.report.stopped_epoch,
        run.report.stop_reason.name(),
        run.model.meta.epochs
    );
    println!("wrote {}", model_path.display());
    Ok(())
}

pub fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let (embedding, labels) = Embedding::read_csv(&args.embedding)?;
    let labels = labels.ok_or_else(|| {
        Error::Param(format!(
            "{} has no label column; neighborhood hit needs labels",
            args.embedding.display()
        ))
    })?;
    let report = neighborhood_hit(&embedding, &labels, args.k)?;
    println!("{}", report.summary());
    if let Some(out) = &args.out {
        report.write_csv(out)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

pub fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let dataset: Dataset = match &args.data {
        Some(path) => load_dataset(&DataOpts {
            data: path.clone(),
            format: None,
            labels: args.labels.clone(),
            delimiter: ',',
        })?,
        None => make_blobs(10, 1000, 50, 1.0, args.seed)?,
    };
    let (method, proj_cfg) = projection_config(&args.method, args.seed)?;
    let train_cfg = train_config(&args.train, args.seed)?;
    ensure_out_dir(&args.out_dir)?;

    if args.epochs_table {
        let table = epochs_table(
            &dataset,
            &args.classes,
            &args.sizes,
            method,
            &proj_cfg,
            &train_cfg,
        )?;
        let path = args.out_dir.join("epochs_table.csv");
        table.write_csv(&path)?;
        for cell in &table.cells {
            match (&cell.epochs, &cell.error) {
                (Some(e), _) => println!(
                    "classes {:2} samples {:6}: {e} epochs ({})",
                    cell.classes,
                    cell.samples,
                    cell.stop_reason.map_or("?", |r| r.name())
                ),
                (None, Some(err)) => {
                    println!("classes {:2} samples {:6}: error: {err}", cell.classes, cell.samples)
                }
                _ => {}
            }
        }
        println!("wrote {}", path.display());
        return Ok(());
    }

    let methods: Result<Vec<BenchMethod>> =
        args.methods.iter().map(|m| BenchMethod::parse(m)).collect();
    let cfg = ScalingConfig {
        sizes: args.sizes.clone(),
        methods: methods?,
        train_size: args.train_size,
        nnp_reference: method,
        projection: proj_cfg,
        train: train_cfg,
        repetitions: args.repetitions,
        warmup: !args.no_warmup,
        seed: args.seed,
    };
    let outcome = run_scaling_suite(&dataset, &cfg)?;
    let path = args.out_dir.join("bench.csv");
    write_records_csv(&outcome.records, &path)?;
    for r in &outcome.records {
        println!(
            "{:10} {:20} n={:7} {:.4}s",
            r.method,
            r.phase.name(),
            r.n_samples,
            r.seconds
        );
    }
    for s in &outcome.skipped {
        eprintln!("skipped {} at n={}: {}", s.method, s.n_samples, s.reason);
    }
    println!("wrote {}", path.display());
    Ok(())
}

pub fn cmd_plot(args: &PlotArgs) -> Result<()> {
    let (embedding, labels) = Embedding::read_csv(&args.embedding)?;
    let spec = PlotSpec {
        width: args.width,
        height: args.height,
        point_radius: args.point_radius,
        title: args.title.clone(),
    };
    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    render_scatter(&embedding, labels.as_deref(), &spec, &args.out)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

pub fn cmd_make_blobs(args: &MakeBlobsArgs) -> Result<()> {
    let d = make_blobs(
        args.classes,
        args.samples_per_class,
        args.dims,
        args.spread,
        args.seed,
    )?;
    if let Some(parent) = PathBuf::from(&args.out).parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    save_csv(&d, &args.out, b',')?;
    println!(
        "wrote {} ({} samples, {} dims, {} classes)",
        args.out.display(),
        d.n_samples(),
        d.n_features(),
        args.classes
    );
    Ok(())
}
