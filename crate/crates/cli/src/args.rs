//! Command-line surface.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "nnproj",
    about = "Learn any 2D projection technique with a small neural network",
    version,
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a reference projection technique on a dataset.
    Project(ProjectArgs),
    /// Split a dataset, project the training subset, and train a network.
    Train(TrainArgs),
    /// Project a dataset with a trained model.
    Infer(InferArgs),
    /// Continue training a saved model on new data.
    Finetune(FinetuneArgs),
    /// Neighborhood-hit quality of a labeled embedding CSV.
    Eval(EvalArgs),
    /// Wall-clock scaling suite or epochs-to-convergence table.
    Bench(BenchArgs),
    /// Render an embedding CSV as an SVG scatterplot.
    Plot(PlotArgs),
    /// Generate a synthetic Gaussian-blob dataset CSV.
    MakeBlobs(MakeBlobsArgs),
}

/// Dataset input options shared by data-consuming commands.
#[derive(Args, Debug, Clone)]
pub struct DataOpts {
    /// Input dataset (.csv, or .idx/.ubyte image file).
    #[arg(long)]
    pub data: PathBuf,
    /// Force the input format instead of sniffing the extension.
    #[arg(long, value_parser = ["csv", "idx"])]
    pub format: Option<String>,
    /// CSV: label column name or index ("none" disables auto-detection).
    /// IDX: path to the matching label file.
    #[arg(long)]
    pub labels: Option<String>,
    /// CSV field delimiter.
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
}

/// Options for the reference projection techniques.
#[derive(Args, Debug, Clone)]
pub struct MethodOpts {
    /// Projection technique: pca, mds, isomap, lle, or tsne.
    #[arg(long, default_value = "tsne")]
    pub method: String,
    /// t-SNE perplexity.
    #[arg(long, default_value_t = 30.0)]
    pub perplexity: f64,
    /// t-SNE gradient-descent iterations.
    #[arg(long, default_value_t = 1000)]
    pub n_iter: usize,
    /// Neighbors for Isomap and LLE.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
}

/// Network training options.
#[derive(Args, Debug, Clone)]
pub struct TrainOpts {
    #[arg(long, default_value_t = 200)]
    pub max_epochs: usize,
    #[arg(long, default_value_t = 0.005)]
    pub target_loss: f64,
    #[arg(long, default_value_t = 10)]
    pub patience: usize,
    #[arg(long, default_value_t = 32)]
    pub batch_size: usize,
    /// Adam learning rate.
    #[arg(long, default_value_t = 0.001)]
    pub learning_rate: f64,
    /// Training loss: mse, mae, or logcosh.
    #[arg(long, default_value = "mse")]
    pub loss: String,
}

#[derive(Args, Debug)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub data: DataOpts,
    #[command(flatten)]
    pub method: MethodOpts,
    /// Also render the embedding as embedding.svg.
    #[arg(long)]
    pub plot: bool,
    /// Neighborhood-hit k for the metric report.
    #[arg(long, default_value_t = 6)]
    pub nh_k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataOpts,
    #[command(flatten)]
    pub method: MethodOpts,
    #[command(flatten)]
    pub train: TrainOpts,
    /// Fraction of the dataset forming the training subset.
    #[arg(long, default_value_t = 0.8)]
    pub train_fraction: f64,
    /// Fraction of the training subset held out for early stopping.
    #[arg(long, default_value_t = 0.1)]
    pub val_fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct InferArgs {
    /// Trained model file.
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub data: DataOpts,
    /// Neighborhood-hit k for the metric report (labeled data only).
    #[arg(long, default_value_t = 6)]
    pub nh_k: usize,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct FinetuneArgs {
    /// Model to start from.
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub data: DataOpts,
    #[command(flatten)]
    pub method: MethodOpts,
    #[command(flatten)]
    pub train: TrainOpts,
    /// Fraction of the new data held out for early stopping.
    #[arg(long, default_value_t = 0.1)]
    pub val_fraction: f64,
    /// Keep the stored target normalizer instead of refitting it to the new
    /// reference projection.
    #[arg(long)]
    pub reuse_target_norm: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Embedding CSV with a label column.
    #[arg(long)]
    pub embedding: PathBuf,
    /// Neighborhood size.
    #[arg(long, default_value_t = 6)]
    pub k: usize,
    /// Optional CSV destination for the per-point report.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Dataset to benchmark on; synthesized blobs when omitted.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// CSV: label column; IDX: label file (see `project --help`).
    #[arg(long)]
    pub labels: Option<String>,
    /// Comma-separated sample counts.
    #[arg(long, default_value = "500,1000", value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Comma-separated methods: pca, mds, isomap, lle, tsne, nnp, nnp-infer.
    #[arg(long, default_value = "tsne,nnp-infer", value_delimiter = ',')]
    pub methods: Vec<String>,
    /// Training-subset size for the nnp methods.
    #[arg(long, default_value_t = 1000)]
    pub train_size: usize,
    /// Timed repetitions per cell (median reported).
    #[arg(long, default_value_t = 3)]
    pub repetitions: usize,
    /// Skip the warm-up run.
    #[arg(long)]
    pub no_warmup: bool,
    /// Produce the epochs-to-convergence table instead of timings; `--sizes`
    /// become sample counts per cell.
    #[arg(long)]
    pub epochs_table: bool,
    /// Class counts for the epochs table.
    #[arg(long, default_value = "2,10", value_delimiter = ',')]
    pub classes: Vec<usize>,
    #[command(flatten)]
    pub method: MethodOpts,
    #[command(flatten)]
    pub train: TrainOpts,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    /// Embedding CSV to render.
    #[arg(long)]
    pub embedding: PathBuf,
    #[arg(long, default_value_t = 800)]
    pub width: u32,
    #[arg(long, default_value_t = 800)]
    pub height: u32,
    #[arg(long, default_value_t = 2.5)]
    pub point_radius: f64,
    #[arg(long)]
    pub title: Option<String>,
    /// Output SVG path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct MakeBlobsArgs {
    #[arg(long, default_value_t = 10)]
    pub classes: usize,
    #[arg(long, default_value_t = 500)]
    pub samples_per_class: usize,
    #[arg(long, default_value_t = 50)]
    pub dims: usize,
    /// Gaussian standard deviation around each class center.
    #[arg(long, default_value_t = 1.0)]
    pub spread: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
}
