use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "odhd", version, about = "One-class HDC outlier detection and CiM mat simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model on the inlier rows of a dataset and write it as JSON.
    Train(TrainArgs),
    /// Score every row of a dataset with a saved model and write a CSV.
    Detect(DetectArgs),
    /// Repeated train/test runs; writes an experiment summary as JSON.
    Eval(EvalArgs),
    /// Latency/energy breakdown of training and testing on one mat design.
    Simulate(SimulateArgs),
    /// Compare mat designs over a set of dataset shapes.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantArg {
    Software,
    Cim,
}

#[derive(Debug, Args, Default)]
pub struct Common {
    /// TOML file with default values; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Master seed for every random draw.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, Default)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Hypervector dimensionality D.
    #[arg(long)]
    pub dims: Option<usize>,
    /// Quantization levels k.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Fine-tuning epochs.
    #[arg(long)]
    pub epochs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub common: Common,
    /// CSV dataset, or `synthetic` for the built-in Gaussian benchmark.
    #[arg(long)]
    pub dataset: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub dataset: Option<String>,
    /// Model JSON written by `train`.
    #[arg(long)]
    pub model: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub dataset: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Share of inliers used for training.
    #[arg(long)]
    pub train_fraction: Option<f64>,
    /// Include wall-clock timings (output is then no longer reproducible).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    /// design1, design2, design3, or a design JSON file.
    #[arg(long)]
    pub design: Option<String>,
    /// Cost table JSON replacing the design's own table.
    #[arg(long)]
    pub cost_table: Option<PathBuf>,
    /// Built-in shape name (e.g. WBC) or a shape JSON file.
    #[arg(long)]
    pub shape: Option<String>,
    /// Take the shape from a CSV dataset instead.
    #[arg(long)]
    pub dataset: Option<String>,
    #[arg(long)]
    pub dims: Option<usize>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Repeatable; defaults to all three presets.
    #[arg(long)]
    pub design: Vec<String>,
    /// Cost table JSON applied to every listed design.
    #[arg(long)]
    pub cost_table: Option<PathBuf>,
    /// Repeatable; defaults to every built-in shape.
    #[arg(long)]
    pub shape: Vec<String>,
    #[arg(long)]
    pub dims: Option<usize>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
}
