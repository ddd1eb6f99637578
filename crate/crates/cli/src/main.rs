use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod error;

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "fakenews", version, about = "Fake-news detection for COVID-19 social media posts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Corpus statistics per label and combined
    Stats(StatsArgs),
    /// Train one pipeline and save it
    Train(TrainArgs),
    /// Grid search over pipeline configurations
    Grid(GridArgs),
    /// Label unlabelled posts with a saved model
    Predict(PredictArgs),
    /// Score a predictions file against gold labels
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Input format; guessed from the file extension when omitted
    #[arg(long, value_parser = ["csv", "tsv"])]
    format: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct ResourceArgs {
    /// Category lexicon in .dic format
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Stopword list, one word per line
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Lemma exceptions, `inflected<TAB>lemma` per line
    #[arg(long)]
    lemmas: Option<PathBuf>,
    /// Known base forms for the lemmatizer, one per line
    #[arg(long)]
    lemma_words: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StatsArgs {
    /// Dataset file
    #[arg(long, visible_aliases = ["train", "val", "test"])]
    data: PathBuf,
    #[command(flatten)]
    data_args: DataArgs,
    /// `whitespace`, `tweet` or `word_punct`
    #[arg(long, default_value = "whitespace")]
    tokenizer: String,
    /// Print key=value lines instead of a table
    #[arg(long)]
    kv: bool,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    val: Option<PathBuf>,
    #[command(flatten)]
    data_args: DataArgs,
    /// Pipeline config (TOML); defaults to the built-in SVM setup
    #[arg(long)]
    config: Option<PathBuf>,
    /// Where to write the trained model
    #[arg(long, visible_alias = "out")]
    model: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    resources: ResourceArgs,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    val: PathBuf,
    #[command(flatten)]
    data_args: DataArgs,
    /// Grid spec (TOML); without it the default grid for `--kind` is used
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Model kind for the default grid
    #[arg(long, default_value = "svm")]
    kind: String,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Results CSV; printed to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Retrain the winning config on the training split and save it here
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    resources: ResourceArgs,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    /// Posts to label; a label column, if any, is ignored
    #[arg(long, visible_alias = "data")]
    test: PathBuf,
    #[command(flatten)]
    data_args: DataArgs,
    /// Predictions CSV `id,label`; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace the model's category lexicon
    #[arg(long)]
    lexicon: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// CSV with `id,label`
    #[arg(long)]
    predictions: PathBuf,
    /// Labelled dataset
    #[arg(long, visible_alias = "test")]
    gold: PathBuf,
    #[command(flatten)]
    data_args: DataArgs,
    #[arg(long)]
    kv: bool,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Stats(a) => commands::stats(&a),
        Command::Train(a) => commands::train(&a),
        Command::Grid(a) => commands::grid(&a),
        Command::Predict(a) => commands::predict(&a),
        Command::Eval(a) => commands::eval(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
