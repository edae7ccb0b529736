//! End-to-end tests of the `nnproj` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nnproj(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nnproj"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary should run")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = nnproj(dir, args);
    assert!(
        out.status.success(),
        "command {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn make_blobs(dir: &Path, file: &str, classes: usize, per_class: usize, dims: usize) {
    ok(
        dir,
        &[
            "make-blobs",
            "--classes",
            &classes.to_string(),
            "--samples-per-class",
            &per_class.to_string(),
            "--dims",
            &dims.to_string(),
            "--spread",
            "0.4",
            "--seed",
            "11",
            "--out",
            file,
        ],
    );
}

#[test]
fn project_writes_embedding_metrics_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    make_blobs(dir.path(), "blobs.csv", 2, 40, 5);
    ok(
        dir.path(),
        &[
            "project", "--data", "blobs.csv", "--method", "pca", "--out-dir", "out", "--plot",
        ],
    );
    let embedding = fs::read_to_string(dir.path().join("out/embedding.csv")).unwrap();
    assert_eq!(embedding.lines().count(), 81); // header + 80 rows
    assert!(embedding.starts_with("x,y,label"));
    assert!(dir.path().join("out/metrics.txt").exists());
    let svg = fs::read_to_string(dir.path().join("out/embedding.svg")).unwrap();
    assert!(svg.contains("<svg"));
    assert_eq!(svg.matches("<circle").count(), 80);
}

#[test]
fn project_rejects_infeasible_perplexity() {
    let dir = tempfile::tempdir().unwrap();
    make_blobs(dir.path(), "blobs.csv", 2, 10, 4);
    let out = nnproj(
        dir.path(),
        &[
            "project",
            "--data",
            "blobs.csv",
            "--method",
            "tsne",
            "--perplexity",
            "25",
            "--out-dir",
            "out",
        ],
    );
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("perplexity"));

    // A feasible perplexity on the same data runs fine.
    ok(
        dir.path(),
        &[
            "project",
            "--data",
            "blobs.csv",
            "--method",
            "tsne",
            "--perplexity",
            "5",
            "--n-iter",
            "50",
            "--out-dir",
            "out2",
        ],
    );
}

#[test]
fn project_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    make_blobs(dir.path(), "blobs.csv", 2, 25, 4);
    for sub in ["a", "b"] {
        ok(
            dir.path(),
            &[
                "project", "--data", "blobs.csv", "--method", "tsne", "--perplexity", "8",
                "--n-iter", "60", "--seed", "9", "--out-dir", sub,
            ],
        );
    }
    let a = fs::read(dir.path().join("a/embedding.csv")).unwrap();
    let b = fs::read(dir.path().join("b/embedding.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn train_infer_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    make_blobs(dir.path(), "blobs.csv", 3, 50, 6);
    ok(
        dir.path(),
        &[
            "train", "--data", "blobs.csv", "--method", "pca", "--max-epochs", "15", "--seed",
            "4", "--out-dir", "run",
        ],
    );
    assert!(dir.path().join("run/model.nnpm").exists());
    let report = fs::read_to_string(dir.path().join("run/train_report.csv")).unwrap();
    assert!(report.starts_with("epoch,train_loss,val_loss"));
    assert!(report.contains("stopped_epoch="));

    ok(
        dir.path(),
        &[
            "infer", "--model", "run/model.nnpm", "--data", "blobs.csv", "--out-dir", "inferred",
        ],
    );
    let eval_out = ok(
        dir.path(),
        &["eval", "--embedding", "inferred/embedding.csv", "--k", "6"],
    );
    let text = String::from_utf8_lossy(&eval_out.stdout);
    assert!(text.contains("neighborhood hit"), "stdout: {text}");
}

#[test]
fn train_single_epoch_reports_one_row() {
    let dir = tempfile::tempdir().unwrap();
    make_blobs(dir.path(), "blobs.csv", 2, 30, 4);
    ok(
        dir.path(),
        &[
            "train", "--data", "blobs.csv", "--method", "pca", "--max-epochs", "1",
            "--target-loss", "1e-12", "--out-dir", "run",
        ],
    );
    let report = fs::read_to_string(dir.path().join("run/train_report.csv")).unwrap();
    let data_rows = report
        .lines()
        .filter(|l| l.chars().next().is_some_and(|c| c.is_ascii_digit()))
        .count();
    assert_eq!(data_rows, 1);
}

#[test]
fn same_seed_gives_identical_model_files() {
    let dir = tempfile::tempdir().unwrap();
    make_blobs(dir.path(), "blobs.csv", 2, 40, 5);
    for sub in ["r1", "r2"] {
        ok(
            dir.path(),
            &[
                "train", "--data", "blobs.csv", "--method", "pca", "--max-epochs", "5",
                "--seed", "21", "--out-dir", sub,
            ],
        );
    }
    let a = fs::read(dir.path().join("r1/model.nnpm")).unwrap();
    let b = fs::read(dir.path().join("r2/model.nnpm")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn infer_twice_is_identical_and_dim_mismatch_fails() {
    let dir = tempfile::tempdir().unwrap();
    make_blobs(dir.path(), "blobs.csv", 2, 30, 5);
    ok(
        dir.path(),
        &[
            "train", "--data", "blobs.csv", "--method", "pca", "--max-epochs", "3", "--out-dir",
            "run",
        ],
    );
    for sub in ["i1", "i2"] {
        ok(
            dir.path(),
            &[
                "infer", "--model", "run/model.nnpm", "--data", "blobs.csv", "--out-dir", sub,
            ],
        );
    }
    assert_eq!(
        fs::read(dir.path().join("i1/embedding.csv")).unwrap(),
        fs::read(dir.path().join("i2/embedding.csv")).unwrap()
    );

    make_blobs(dir.path(), "wrong.csv", 2, 20, 7);
    let out = nnproj(
        dir.path(),
        &[
            "infer", "--model", "run/model.nnpm", "--data", "wrong.csv", "--out-dir", "bad",
        ],
    );
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains('5') && err.contains('7'), "stderr: {err}");
}

#[test]
fn finetune_zero_epochs_keeps_model_behavior() {
    let dir = tempfile::tempdir().unwrap();
    make_blobs(dir.path(), "blobs.csv", 2, 40, 5);
    ok(
        dir.path(),
        &[
            "train", "--data", "blobs.csv", "--method", "pca", "--max-epochs", "5", "--out-dir",
            "run",
        ],
    );
    ok(
        dir.path(),
        &[
            "finetune", "--model", "run/model.nnpm", "--data", "blobs.csv", "--method", "pca",
            "--max-epochs", "0", "--out-dir", "ft",
        ],
    );
    // Forward-equal: inference outputs coincide bit for bit.
    for (model, sub) in [("run/model.nnpm", "a"), ("ft/model.nnpm", "b")] {
        ok(
            dir.path(),
            &["infer", "--model", model, "--data", "blobs.csv", "--out-dir", sub],
        );
    }
    assert_eq!(
        fs::read(dir.path().join("a/embedding.csv")).unwrap(),
        fs::read(dir.path().join("b/embedding.csv")).unwrap()
    );
}

#[test]
fn finetune_missing_model_fails() {
    let dir = tempfile::tempdir().unwrap();
    make_blobs(dir.path(), "blobs.csv", 2, 20, 4);
    let out = nnproj(
        dir.path(),
        &[
            "finetune", "--model", "nope.nnpm", "--data", "blobs.csv", "--out-dir", "ft",
        ],
    );
    assert!(!out.status.success());
}

#[test]
fn bench_writes_csv_with_expected_rows() {
    let dir = tempfile::tempdir().unwrap();
    make_blobs(dir.path(), "blobs.csv", 2, 60, 5);
    ok(
        dir.path(),
        &[
            "bench", "--data", "blobs.csv", "--sizes", "40,80", "--methods", "pca,nnp-infer",
            "--train-size", "60", "--max-epochs", "1", "--repetitions", "1", "--no-warmup",
            "--method", "pca", "--out-dir", "bench",
        ],
    );
    let csv = fs::read_to_string(dir.path().join("bench/bench.csv")).unwrap();
    assert!(csv.starts_with("method,phase,n_samples,n_dims,seconds,seed"));
    assert_eq!(csv.lines().count(), 5); // header + 2 sizes x 2 methods
}

#[test]
fn plot_produces_svg_with_all_points() {
    let dir = tempfile::tempdir().unwrap();
    make_blobs(dir.path(), "blobs.csv", 2, 25, 4);
    ok(
        dir.path(),
        &["project", "--data", "blobs.csv", "--method", "pca", "--out-dir", "p"],
    );
    ok(
        dir.path(),
        &[
            "plot", "--embedding", "p/embedding.csv", "--out", "p/fig.svg", "--title", "blobs",
        ],
    );
    let svg = fs::read_to_string(dir.path().join("p/fig.svg")).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg.matches("<circle").count(), 50);
    assert!(svg.contains("blobs"));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    make_blobs(dir.path(), "blobs.csv", 2, 25, 4);
    fs::write(
        dir.path().join("exp.cfg"),
        "method = pca\nseed = 5\nout-dir = from_config\n",
    )
    .unwrap();

    // Config alone routes the output.
    ok(
        dir.path(),
        &["project", "--data", "blobs.csv", "--config", "exp.cfg"],
    );
    assert!(dir.path().join("from_config/embedding.csv").exists());

    // An explicit flag beats the config entry.
    ok(
        dir.path(),
        &[
            "project", "--data", "blobs.csv", "--config", "exp.cfg", "--out-dir", "cli_wins",
        ],
    );
    assert!(dir.path().join("cli_wins/embedding.csv").exists());
}

#[test]
fn cli_project_matches_library_call() {
    let dir = tempfile::tempdir().unwrap();
    make_blobs(dir.path(), "blobs.csv", 2, 30, 4);
    ok(
        dir.path(),
        &[
            "project", "--data", "blobs.csv", "--method", "tsne", "--perplexity", "7",
            "--n-iter", "40", "--seed", "13", "--out-dir", "cli",
        ],
    );
    let (cli_embedding, _) =
        nnproj_core::projections::Embedding::read_csv(dir.path().join("cli/embedding.csv"))
            .unwrap();

    let dataset = nnproj_core::data::load_csv(
        dir.path().join("blobs.csv"),
        &nnproj_core::data::CsvOptions {
            label: Some(nnproj_core::data::LabelColumn::Name("label".into())),
            ..Default::default()
        },
    )
    .unwrap();
    let run = nnproj_core::projections::tsne_project(
        &dataset,
        &nnproj_core::projections::TsneConfig {
            perplexity: 7.0,
            n_iter: 40,
            seed: 13,
            ..Default::default()
        },
    )
    .unwrap();
    for (a, b) in cli_embedding
        .coords
        .as_slice()
        .iter()
        .zip(run.embedding.coords.as_slice())
    {
        assert_eq!(a, b, "CLI and library outputs must match bit for bit");
    }
}

#[test]
fn eval_requires_labels() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("plain.csv"), "x,y\n0.1,0.2\n0.3,0.4\n").unwrap();
    let out = nnproj(dir.path(), &["eval", "--embedding", "plain.csv"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("label"));
}
