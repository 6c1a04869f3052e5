//! Readers and writers for the artifacts stages exchange.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::Context as _;
use stancekit::corpus::TweetRecord;
use stancekit::sentiment::SentimentLabel;
use stancekit::stance::{StanceLabel, StanceSource, TweetStance};

use crate::CliError;

/// Write the normalized corpus as JSONL (pure data, no header line).
pub fn write_corpus_jsonl(path: &Path, records: &[TweetRecord]) -> Result<(), CliError> {
    let mut out = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    for record in records {
        serde_json::to_writer(&mut out, record).context("serializing tweet record")?;
        out.write_all(b"\n").context("writing corpus line")?;
    }
    out.flush().context("flushing corpus")?;
    Ok(())
}

/// Load the normalized corpus a previous `ingest` wrote.
pub fn read_corpus_artifact(path: &Path) -> Result<Vec<TweetRecord>, CliError> {
    let loaded = stancekit::corpus::load_corpus(path, true)
        .with_context(|| format!("reading corpus artifact {}", path.display()))?;
    Ok(loaded.records)
}

fn parse_stance_label(s: &str) -> Result<StanceLabel, CliError> {
    match s {
        "ProRemain" => Ok(StanceLabel::ProRemain),
        "ProLeave" => Ok(StanceLabel::ProLeave),
        "NonPolarized" => Ok(StanceLabel::NonPolarized),
        other => Err(CliError::Other(anyhow::anyhow!("unknown stance label {other:?}"))),
    }
}

/// Read `tweet_stances.csv` back into a tweet-id map.
pub fn read_tweet_stances(path: &Path) -> Result<BTreeMap<String, TweetStance>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut map = BTreeMap::new();
    for row in reader.deserialize::<(String, String, String)>() {
        let (tweet_id, label, source) = row.context("parsing tweet stance row")?;
        let source = match source.as_str() {
            "Rule" => StanceSource::Rule,
            "Model" => StanceSource::Model,
            other => return Err(CliError::Other(anyhow::anyhow!("unknown stance source {other:?}"))),
        };
        map.insert(tweet_id, TweetStance { label: parse_stance_label(&label)?, source });
    }
    Ok(map)
}

/// Read `tweet_sentiment.csv` back into a tweet-id map.
pub fn read_tweet_sentiments(path: &Path) -> Result<BTreeMap<String, SentimentLabel>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut map = BTreeMap::new();
    for row in reader.deserialize::<(String, f64, String)>() {
        let (tweet_id, _score, label) = row.context("parsing sentiment row")?;
        let label = match label.as_str() {
            "Positive" => SentimentLabel::Positive,
            "Negative" => SentimentLabel::Negative,
            "Neutral" => SentimentLabel::Neutral,
            other => return Err(CliError::Other(anyhow::anyhow!("unknown sentiment label {other:?}"))),
        };
        map.insert(tweet_id, label);
    }
    Ok(map)
}

/// Read `doc_topics.csv` (tweet id, dominant topic of the full-period model).
pub fn read_doc_topics(path: &Path) -> Result<BTreeMap<String, usize>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut map = BTreeMap::new();
    for row in reader.deserialize::<(String, usize)>() {
        let (tweet_id, topic) = row.context("parsing doc topic row")?;
        map.insert(tweet_id, topic);
    }
    Ok(map)
}
