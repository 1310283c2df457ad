use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "boostdf",
    version,
    about = "Boosting experiments and degrees-of-freedom curves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte-Carlo df curves (trace, active set, covariance) for a simulation model.
    DofCurves(DofCurvesArgs),
    /// BinomialBoost with stumps and larger trees on the additive logistic model.
    ClassifySim(ClassifySimArgs),
    /// Fit L2Boost or BinomialBoost to a CSV file.
    Fit(FitArgs),
    /// Re-run the command recorded in a manifest.json.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelId {
    #[value(name = "1")]
    #[serde(rename = "1")]
    One,
    #[value(name = "2")]
    #[serde(rename = "2")]
    Two,
    #[value(name = "3")]
    #[serde(rename = "3")]
    Three,
    /// Friedman #1 with noise variance 1.
    F1Lo,
    /// Friedman #1 with noise variance 10.
    F1Hi,
}

impl ModelId {
    pub fn label(self) -> &'static str {
        match self {
            ModelId::One => "1",
            ModelId::Two => "2",
            ModelId::Three => "3",
            ModelId::F1Lo => "f1-lo",
            ModelId::F1Hi => "f1-hi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmootherKind {
    Linear,
    Spline,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DofCurvesArgs {
    #[arg(long, value_enum)]
    pub model: ModelId,
    #[arg(long, value_enum, default_value = "linear")]
    pub learner: SmootherKind,
    #[arg(long, default_value_t = 0.1)]
    pub nu: f64,
    #[arg(long, default_value_t = 150)]
    pub mstop: usize,
    #[arg(long, default_value_t = 100)]
    pub reps: usize,
    /// Master seed for the design and the noise; the model's own seed when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 4.0)]
    pub spline_df: f64,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ClassifySimArgs {
    #[arg(long, default_value_t = 50)]
    pub nsim: usize,
    #[arg(long, default_value_t = 1000)]
    pub mstop: usize,
    #[arg(long, default_value_t = 0.1)]
    pub nu: f64,
    /// Terminal-node limit of the larger trees.
    #[arg(long, default_value_t = 8)]
    pub max_leaves: usize,
    #[arg(long, default_value_t = 6)]
    pub seed: u64,
    /// Keep every `stride`-th iteration in the output.
    #[arg(long, default_value_t = 10)]
    pub stride: usize,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Loss {
    L2,
    Binomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearnerKind {
    Linear,
    Spline,
    Stump,
    Tree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopRule {
    Fixed,
    AicTrace,
    AicActset,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FitArgs {
    /// Headered CSV of numeric columns.
    #[arg(long)]
    pub data: PathBuf,
    /// Name of the response column; every other column is a covariate.
    #[arg(long)]
    pub response: String,
    #[arg(long, value_enum, default_value = "l2")]
    pub loss: Loss,
    #[arg(long, value_enum, default_value = "linear")]
    pub learner: LearnerKind,
    #[arg(long, default_value_t = 0.1)]
    pub nu: f64,
    #[arg(long, default_value_t = 100)]
    pub mstop: usize,
    #[arg(long, value_enum, default_value = "fixed")]
    pub stop: StopRule,
    #[arg(long, default_value_t = 4.0)]
    pub spline_df: f64,
    #[arg(long, default_value_t = 8)]
    pub max_leaves: usize,
    /// Recorded in the manifest; fitting itself is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Where to write; the recorded directory when omitted.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}
