//! `clickclust`: batch clustering of web-usage session logs.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 input parse/validation
//! error, 3 internal invariant violation.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "clickclust", version, about = "Cluster web-usage session logs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Corpus statistics: session count, mean and range of session length.
    Stats(StatsArgs),
    /// Threshold (tolerance) clustering on Jaccard similarity of page sets.
    Tolerance(ToleranceArgs),
    /// Improved fuzzy c-means with entropy-based initialization.
    Fcm(FcmArgs),
    /// Purity, inverse purity and Purity-F of a clustering against labels.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// JSON or TOML file with the same keys as the long flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Args, Debug, Clone, Default)]
pub struct InputArgs {
    /// Sequence log in the msnbc format.
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    /// Whitespace-separated category names, used instead of a name line in the input.
    #[arg(long)]
    pub dictionary: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct ToleranceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Similarity threshold in (0, 1].
    #[arg(short, long)]
    pub p: Option<f64>,
    /// Threshold-graph components without the matrix; omits per-item classes.
    #[arg(long)]
    pub streaming: bool,
    /// Also dump the similarity matrix as CSV to this path.
    #[arg(long)]
    pub matrix_out: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct FcmArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Membership threshold for center updates, in [0, 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Fuzzifier, > 1.
    #[arg(short, long)]
    pub m: Option<f64>,
    /// Similarity threshold for entropy initialization, in (0, 1).
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// uniform, info_gain or gain_ratio.
    #[arg(long)]
    pub weights: Option<String>,
    /// normalized or frequency.
    #[arg(long)]
    pub vectorize: Option<String>,
    /// Threshold of the tolerance pass that labels sessions for weighting.
    #[arg(long)]
    pub label_p: Option<f64>,
    /// Merge hardened clusters whose centroids are at least this similar.
    #[arg(long)]
    pub merge_p: Option<f64>,
    /// Include the membership matrix even when there are more than 10,000 sessions.
    #[arg(long)]
    pub emit_memberships: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    /// Clustering to score (JSON with a `clusters` field, or item_id,cluster_id CSV).
    #[arg(long)]
    pub clusters: Option<PathBuf>,
    /// Reference classes, same formats.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Include precision, recall and F for every overlapping pair.
    #[arg(long)]
    pub per_pair: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn run() -> Result<(), CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(());
            }
            let msg = e.to_string();
            let msg = msg.trim_end().trim_start_matches("error: ");
            return Err(CliError::Usage(msg.to_string()));
        }
    };
    match cli.command {
        Command::Stats(a) => commands::stats(a),
        Command::Tolerance(a) => commands::tolerance(a),
        Command::Fcm(a) => commands::fcm(a),
        Command::Eval(a) => commands::eval(a),
    }
}

fn main() -> ExitCode {
    match std::panic::catch_unwind(run) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("clickclust: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(CliError::Internal(String::new()).exit_code() as u8),
    }
}
