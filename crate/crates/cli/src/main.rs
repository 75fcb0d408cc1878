//! `cesel` — copula-entropy variable selection for facies classification.
//!
//! Subcommands: `rank` scores every variable by its copula entropy against
//! the facies label, `select` applies a cutoff rule to that ranking,
//! `evaluate` runs leave-one-well-out cross-validation, and `compare` runs
//! the evaluation with all variables and with the selected subset and reports
//! the accuracy delta. Every command writes a JSON report embedding the full
//! run configuration; identical configurations produce byte-identical output.
//!
//! Exit codes: 0 success, 2 schema/input error, 3 degenerate configuration,
//! 1 internal error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cesel", version, about = "Copula-entropy variable selection for facies classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank variables by copula entropy against the facies label
    Rank(RankArgs),
    /// Rank variables, then apply a selection rule
    Select(SelectArgs),
    /// Leave-one-well-out cross-validation of the kNN classifier
    Evaluate(EvaluateArgs),
    /// Compare classification with all variables vs the selected subset
    Compare(CompareArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum MissingArg {
    /// Drop rows with missing cells
    Drop,
    /// Impute missing feature cells with the per-well column median
    Median,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum WeightingArg {
    /// Each neighbor votes with weight 1
    Uniform,
    /// Each neighbor votes with weight 1/distance
    Inverse,
}

#[derive(Args)]
pub(crate) struct DataArgs {
    /// Input CSV path
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,

    /// Column holding the well identifier
    #[arg(long, default_value = "well")]
    pub well_col: String,

    /// Column holding depth (carried as metadata only)
    #[arg(long, default_value = "depth")]
    pub depth_col: String,

    /// Column holding the integer facies label
    #[arg(long, default_value = "facies")]
    pub label_col: String,

    /// Comma-separated feature column names
    #[arg(long, value_delimiter = ',', required = true, value_name = "NAMES")]
    pub features: Vec<String>,

    /// Missing-value policy
    #[arg(long, value_enum, default_value_t = MissingArg::Drop)]
    pub missing: MissingArg,

    /// Token treated as missing, in addition to empty cells
    #[arg(long, value_name = "TOKEN")]
    pub missing_token: Option<String>,

    /// Sidecar JSON with class names and facies adjacency
    #[arg(long, value_name = "PATH")]
    pub adjacency: Option<PathBuf>,
}

#[derive(Args)]
pub(crate) struct CeArgs {
    /// Neighbor order of the entropy estimator
    #[arg(long, default_value_t = 3)]
    pub k_ce: usize,

    /// Break label ties with a deterministic +/-1e-6 jitter (seeded) before ranking
    #[arg(long)]
    pub jitter_label: bool,
}

#[derive(Args)]
pub(crate) struct SeedArg {
    /// Seed determining every randomized step (currently the label jitter)
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
pub(crate) struct RuleArgs {
    /// Select the m most negative variables
    #[arg(long, value_name = "M")]
    pub top_k: Option<usize>,

    /// Select every variable with CE at or below this value (nats)
    #[arg(long, value_name = "NATS", allow_hyphen_values = true)]
    pub threshold: Option<f64>,
}

#[derive(Args)]
pub(crate) struct KnnArgs {
    /// Neighbor count of the kNN classifier
    #[arg(long, default_value_t = 5)]
    pub knn: usize,

    /// Neighbor vote weighting
    #[arg(long, value_enum, default_value_t = WeightingArg::Inverse)]
    pub weighting: WeightingArg,
}

#[derive(Args)]
pub(crate) struct OutArgs {
    /// Directory receiving the JSON/CSV reports
    #[arg(long, default_value = ".", value_name = "DIR")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub(crate) struct RankArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub ce: CeArgs,
    #[command(flatten)]
    pub seed: SeedArg,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub(crate) struct SelectArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub ce: CeArgs,
    #[command(flatten)]
    pub rule: RuleArgs,
    #[command(flatten)]
    pub seed: SeedArg,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub(crate) struct EvaluateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub knn: KnnArgs,
    #[command(flatten)]
    pub seed: SeedArg,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub(crate) struct CompareArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub ce: CeArgs,
    #[command(flatten)]
    pub rule: RuleArgs,
    #[command(flatten)]
    pub knn: KnnArgs,
    #[command(flatten)]
    pub seed: SeedArg,

    /// Comma-separated seeds; reruns the comparison per seed and reports the mean delta
    #[arg(long, value_delimiter = ',', value_name = "SEEDS")]
    pub seeds: Option<Vec<u64>>,

    #[command(flatten)]
    pub out: OutArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Rank(args) => commands::cmd_rank(&args),
        Command::Select(args) => commands::cmd_select(&args),
        Command::Evaluate(args) => commands::cmd_evaluate(&args),
        Command::Compare(args) => commands::cmd_compare(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
