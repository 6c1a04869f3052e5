//! `crosstab`: stance and sentiment shares by topic and by mentioned
//! tracked account.

use std::collections::BTreeMap;

use stancekit::analytics::{cross_tab, GroupTab};
use stancekit::report::{fmt_opt_f64, write_csv, write_json};
use stancekit::sentiment::SentimentLabel;
use stancekit::stance::StanceLabel;

use crate::artifacts::{read_doc_topics, read_tweet_sentiments, read_tweet_stances};
use crate::commands::load_corpus_artifact;
use crate::context::Ctx;
use crate::CliError;

fn tab_rows(tabs: &BTreeMap<String, GroupTab>) -> Vec<Vec<String>> {
    tabs.iter()
        .map(|(key, tab)| {
            vec![
                key.clone(),
                tab.n.to_string(),
                fmt_opt_f64(tab.stance_shares.map(|s| s.0)),
                fmt_opt_f64(tab.stance_shares.map(|s| s.1)),
                fmt_opt_f64(tab.sentiment_shares.map(|s| s.0)),
                fmt_opt_f64(tab.sentiment_shares.map(|s| s.1)),
            ]
        })
        .collect()
}

pub fn run(ctx: &mut Ctx) -> Result<(), CliError> {
    let records = load_corpus_artifact(ctx)?;
    let stances_path = ctx.require("stance/tweet_stances.csv", "stance-predict")?;
    let sentiments_path = ctx.require("sentiment/tweet_sentiment.csv", "sentiment")?;
    let doc_topics_path = ctx.require("topics/doc_topics.csv", "topics")?;

    let stance_records = read_tweet_stances(&stances_path)?;
    let stances: BTreeMap<String, StanceLabel> = stance_records
        .iter()
        .map(|(id, s)| (id.clone(), s.label))
        .collect();
    let sentiments: BTreeMap<String, SentimentLabel> = read_tweet_sentiments(&sentiments_path)?;
    let meta = ctx.meta();

    // By dominant topic of the full-period model (influence-filtered tweets).
    let topic_keys: BTreeMap<String, String> = read_doc_topics(&doc_topics_path)?
        .into_iter()
        .map(|(tweet_id, topic)| (tweet_id, topic.to_string()))
        .collect();
    let by_topic = cross_tab(&topic_keys, &stances, &sentiments)?;
    let topic_header = ["topic", "n", "remain_share", "leave_share", "positive_share", "negative_share"];
    write_csv(ctx.artifact("crosstab/by_topic.csv")?, &meta, &topic_header, tab_rows(&by_topic))?;
    write_json(ctx.artifact("crosstab/by_topic.json")?, &meta, &by_topic)?;

    // By tracked mentioned account; a tweet mentioning several tracked
    // handles counts toward each of them.
    let tracked_path = ctx.require("mentions/tracked.csv", "mentions")?;
    let tracked = read_tracked_handles(&tracked_path)?;
    let mut by_mention: BTreeMap<String, GroupTab> = BTreeMap::new();
    for handle in &tracked {
        let keys: BTreeMap<String, String> = records
            .iter()
            .filter(|r| r.mentions.contains(handle))
            .map(|r| (r.id.clone(), handle.clone()))
            .collect();
        if keys.is_empty() {
            continue;
        }
        by_mention.extend(cross_tab(&keys, &stances, &sentiments)?);
    }
    let mention_header = ["handle", "n", "remain_share", "leave_share", "positive_share", "negative_share"];
    write_csv(ctx.artifact("crosstab/by_mention.csv")?, &meta, &mention_header, tab_rows(&by_mention))?;
    write_json(ctx.artifact("crosstab/by_mention.json")?, &meta, &by_mention)?;

    ctx.finish_stage(
        "crosstab",
        &[
            "crosstab/by_topic.csv",
            "crosstab/by_topic.json",
            "crosstab/by_mention.csv",
            "crosstab/by_mention.json",
        ],
    )
}

fn read_tracked_handles(path: &std::path::Path) -> Result<Vec<String>, CliError> {
    use anyhow::Context as _;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut handles = Vec::new();
    for row in reader.deserialize::<(String, u64, String)>() {
        let (handle, _, _) = row.context("parsing tracked handle row")?;
        handles.push(handle);
    }
    Ok(handles)
}
