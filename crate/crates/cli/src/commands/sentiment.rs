//! `sentiment`: lexicon polarity per tweet.

use stancekit::report::{fmt_f64, write_csv, write_json};
use stancekit::sentiment::{score_sentiment, SentimentLexicon};
use stancekit::stance::ml::tokenize;

use crate::commands::load_corpus_artifact;
use crate::context::Ctx;
use crate::CliError;

pub(crate) fn load_sentiment_lexicon(ctx: &Ctx) -> Result<SentimentLexicon, CliError> {
    match (&ctx.config.sentiment_lexicon, &ctx.config.negations) {
        (Some(polarity), Some(negations)) => Ok(SentimentLexicon::from_paths(polarity, negations)?),
        (None, None) => Ok(SentimentLexicon::bundled()),
        _ => Err(CliError::Config {
            key: "sentiment_lexicon/negations".into(),
            reason: "override both files or neither".into(),
        }),
    }
}

pub fn run(ctx: &mut Ctx) -> Result<(), CliError> {
    let records = load_corpus_artifact(ctx)?;
    let lexicon = load_sentiment_lexicon(ctx)?;
    let meta = ctx.meta();

    let scored: Vec<(String, f64, stancekit::sentiment::SentimentLabel)> = records
        .iter()
        .map(|r| {
            let (score, label) = score_sentiment(&tokenize(&r.text), &lexicon);
            (r.id.clone(), score, label)
        })
        .collect();

    write_csv(
        ctx.artifact("sentiment/tweet_sentiment.csv")?,
        &meta,
        &["tweet_id", "score", "label"],
        scored
            .iter()
            .map(|(id, score, label)| vec![id.clone(), fmt_f64(*score), label.to_string()]),
    )?;
    write_json(ctx.artifact("sentiment/tweet_sentiment.json")?, &meta, &scored)?;

    ctx.finish_stage("sentiment", &["sentiment/tweet_sentiment.csv", "sentiment/tweet_sentiment.json"])
}
