//! `stancekit` — batch analytics over tweet corpora: stance classification,
//! topic discovery, sentiment, bot joins, mention influence, and reports.

mod artifacts;
mod commands;
mod config;
mod context;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Overrides, RunConfig};
use context::Ctx;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config {key}: {reason}")]
    Config { key: String, reason: String },

    #[error("missing artifact {path}: run the `{stage}` stage first")]
    MissingArtifact { stage: String, path: String },

    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl From<stancekit::Error> for CliError {
    fn from(err: stancekit::Error) -> Self {
        CliError::Other(err.into())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::MissingArtifact { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Parser)]
#[command(name = "stancekit", version, about = "Batch analytics for polarized social-media debates")]
struct Cli {
    /// Config file (TOML). Falls back to $STANCEKIT_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Raw corpus JSONL.
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Artifact directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Keep only tweets in this language.
    #[arg(long, global = true)]
    lang: Option<String>,

    /// Keep only tweets at or after this instant (ISO-8601).
    #[arg(long, global = true)]
    from: Option<String>,

    /// Keep only tweets before this instant (ISO-8601).
    #[arg(long, global = true)]
    to: Option<String>,

    /// Seed for both the stance trainer and the LDA sampler.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// LDA topic count.
    #[arg(long = "topics-k", global = true)]
    topics_k: Option<usize>,

    /// Pre/post comparison date.
    #[arg(long = "event-date", global = true)]
    event_date: Option<String>,

    /// Abort ingest on the first malformed line.
    #[arg(long, global = true)]
    strict: bool,

    /// Labeled training CSV `tweet_id,text,label`.
    #[arg(long, global = true)]
    labels: Option<PathBuf>,

    /// Bot scores CSV `user_id,score`.
    #[arg(long = "bot-scores", global = true)]
    bot_scores: Option<PathBuf>,

    /// Mention categories CSV `handle,category`.
    #[arg(long, global = true)]
    categories: Option<PathBuf>,

    /// External monthly series CSV `month,value`.
    #[arg(long = "trend-series", global = true)]
    trend_series: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Validate and normalize the raw corpus; write rejects report.
    Ingest,
    /// Descriptive corpus statistics.
    Stats,
    /// Rule-based stance over stance-indicative hashtags.
    StanceRules,
    /// Train the linear stance model from labeled data, with cross-validation.
    StanceTrain,
    /// Classify every tweet (rules first, model for the rest) and aggregate users.
    StancePredict,
    /// Monthly stance series and pre/post-event transitions.
    StanceReport,
    /// Topic discovery: LDA, top words, coherence, period segmentation.
    Topics,
    /// Lexicon sentiment per tweet.
    Sentiment,
    /// Join bot scores with user stances.
    Bots,
    /// Mention totals, categories, and influence over time.
    Mentions,
    /// Stance/sentiment cross-tabs by topic and by mentioned account.
    Crosstab,
    /// Correlate monthly tweet volume with an external series.
    Correlate,
    /// Run every stage in order.
    Pipeline,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let overrides = Overrides {
        input: cli.input.clone(),
        out: cli.out.clone(),
        lang: cli.lang.clone(),
        from: cli.from.clone(),
        to: cli.to.clone(),
        strict: cli.strict,
        seed: cli.seed,
        topics_k: cli.topics_k,
        event_date: cli.event_date.clone(),
        labels: cli.labels.clone(),
        bot_scores: cli.bot_scores.clone(),
        categories: cli.categories.clone(),
        trend_series: cli.trend_series.clone(),
    };
    let config = RunConfig::resolve(cli.config.as_ref(), &overrides)?;
    let mut ctx = Ctx::new(config)?;
    match cli.command {
        Command::Ingest => commands::ingest::run(&mut ctx),
        Command::Stats => commands::stats::run(&mut ctx),
        Command::StanceRules => commands::stance::rules(&mut ctx),
        Command::StanceTrain => commands::stance::train(&mut ctx),
        Command::StancePredict => commands::stance::predict(&mut ctx),
        Command::StanceReport => commands::stance::report(&mut ctx),
        Command::Topics => commands::topics::run(&mut ctx),
        Command::Sentiment => commands::sentiment::run(&mut ctx),
        Command::Bots => commands::bots::run(&mut ctx),
        Command::Mentions => commands::mentions::run(&mut ctx),
        Command::Crosstab => commands::crosstab::run(&mut ctx),
        Command::Correlate => commands::correlate::run(&mut ctx),
        Command::Pipeline => commands::pipeline::run(&mut ctx),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
