//! Tweet corpus ingestion, validation, filtering, and descriptive statistics.
//!
//! Input is newline-delimited JSON, one tweet per line. Required fields:
//! `id`, `user_id`, `created_at`, `text`, `lang`, `retweet_count`,
//! `like_count`. Optional: `hashtags`, `mentions`, `user_followers`.
//! When `hashtags` or `mentions` are absent they are derived from the text.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use std::sync::LazyLock;

use chrono::{DateTime, Utc};
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::time::{parse_timestamp, Month, TimeWindow};

/// One validated post.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub id: String,
    pub user_id: String,
    pub created_at: DateTime<Utc>,
    pub text: String,
    pub lang: String,
    pub retweet_count: u64,
    pub like_count: u64,
    pub hashtags: BTreeSet<String>,
    pub mentions: BTreeSet<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub user_followers: Option<u64>,
}

impl TweetRecord {
    /// Whitespace-token count of the raw text.
    pub fn word_count(&self) -> usize {
        self.text.split_whitespace().count()
    }
}

/// A skipped input line and why it was skipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reject {
    pub line_no: u64,
    pub reason: String,
}

/// Result of reading a corpus file: validated records plus the rejects report.
#[derive(Debug, Default)]
pub struct LoadedCorpus {
    pub records: Vec<TweetRecord>,
    pub rejects: Vec<Reject>,
}

#[derive(Deserialize)]
struct RawTweet {
    id: String,
    user_id: String,
    created_at: String,
    text: String,
    lang: String,
    retweet_count: u64,
    like_count: u64,
    #[serde(default)]
    hashtags: Option<Vec<String>>,
    #[serde(default)]
    mentions: Option<Vec<String>>,
    #[serde(default)]
    user_followers: Option<u64>,
}

static HASHTAG_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"#(\w+)").unwrap());
static MENTION_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"@(\w+)").unwrap());

/// Hashtags referenced in `text`: `#`-prefixed word-character runs, lowercased.
pub fn hashtags_in_text(text: &str) -> BTreeSet<String> {
    HASHTAG_RE
        .captures_iter(text)
        .map(|c| c[1].to_lowercase())
        .collect()
}

/// Handles referenced in `text`: `@`-prefixed word-character runs, lowercased.
pub fn mentions_in_text(text: &str) -> BTreeSet<String> {
    MENTION_RE
        .captures_iter(text)
        .map(|c| c[1].to_lowercase())
        .collect()
}

fn normalize_tag_set(tags: Vec<String>, prefix: char) -> BTreeSet<String> {
    tags.into_iter()
        .map(|t| t.trim_start_matches(prefix).to_lowercase())
        .filter(|t| !t.is_empty())
        .collect()
}

fn validate(raw: RawTweet) -> std::result::Result<TweetRecord, String> {
    if raw.id.is_empty() {
        return Err("empty id".into());
    }
    if raw.user_id.is_empty() {
        return Err("empty user_id".into());
    }
    let created_at =
        parse_timestamp(&raw.created_at).map_err(|_| format!("unparseable created_at {:?}", raw.created_at))?;
    let hashtags = match raw.hashtags {
        Some(tags) => normalize_tag_set(tags, '#'),
        None => hashtags_in_text(&raw.text),
    };
    let mentions = match raw.mentions {
        Some(handles) => normalize_tag_set(handles, '@'),
        None => mentions_in_text(&raw.text),
    };
    Ok(TweetRecord {
        id: raw.id,
        user_id: raw.user_id,
        created_at,
        text: raw.text,
        lang: raw.lang,
        retweet_count: raw.retweet_count,
        like_count: raw.like_count,
        hashtags,
        mentions,
        user_followers: raw.user_followers,
    })
}

/// Read a JSONL corpus file.
///
/// Malformed lines are skipped and reported in [`LoadedCorpus::rejects`]
/// (with `strict`, the first malformed line aborts the load). A line whose
/// id was already seen is skipped with a warning and a reject entry.
pub fn load_corpus(path: impl AsRef<Path>, strict: bool) -> Result<LoadedCorpus> {
    load_corpus_from(File::open(path)?, strict)
}

/// Same as [`load_corpus`] but over any reader.
pub fn load_corpus_from(reader: impl Read, strict: bool) -> Result<LoadedCorpus> {
    let mut out = LoadedCorpus::default();
    let mut seen_ids: HashSet<String> = HashSet::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = idx as u64 + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<RawTweet>(&line)
            .map_err(|e| e.to_string())
            .and_then(validate);
        match parsed {
            Ok(record) => {
                if seen_ids.contains(&record.id) {
                    log::warn!("line {line_no}: duplicate id {:?}, record skipped", record.id);
                    out.rejects.push(Reject {
                        line_no,
                        reason: format!("duplicate id {:?}", record.id),
                    });
                } else {
                    seen_ids.insert(record.id.clone());
                    out.records.push(record);
                }
            }
            Err(reason) => {
                if strict {
                    return Err(Error::MalformedRecord { line_no, reason });
                }
                out.rejects.push(Reject { line_no, reason });
            }
        }
    }
    Ok(out)
}

/// Keep records matching every provided predicate; order preserved.
pub fn filter_corpus<I>(
    tweets: I,
    lang: Option<String>,
    window: Option<TimeWindow>,
) -> impl Iterator<Item = TweetRecord>
where
    I: IntoIterator<Item = TweetRecord>,
{
    tweets.into_iter().filter(move |t| {
        lang.as_deref().is_none_or(|l| t.lang == l)
            && window.is_none_or(|w| w.contains(t.created_at))
    })
}

/// Keep records with `retweet_count >= min_retweets` and at least
/// `min_words` whitespace tokens. Both thresholds are inclusive.
pub fn influence_filter<I>(tweets: I, min_retweets: u64, min_words: usize) -> impl Iterator<Item = TweetRecord>
where
    I: IntoIterator<Item = TweetRecord>,
{
    tweets
        .into_iter()
        .filter(move |t| t.retweet_count >= min_retweets && t.word_count() >= min_words)
}

/// Descriptive statistics over a corpus.
#[derive(Debug, Clone, Serialize)]
pub struct CorpusStats {
    pub tweets_per_month: BTreeMap<Month, u64>,
    /// posts-per-user histogram: key = number of posts, value = number of users.
    pub users_by_post_count: BTreeMap<u64, u64>,
    pub language_shares: BTreeMap<String, f64>,
    /// Mean over users of each user's maximum observed follower count.
    /// Users without follower data are excluded.
    pub mean_followers: Option<f64>,
    pub monthly_engagement: BTreeMap<Month, EngagementPoint>,
}

/// Mean retweets and likes per tweet within one month.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EngagementPoint {
    pub mean_retweets: f64,
    pub mean_likes: f64,
}

/// Compute [`CorpusStats`]. Errors on an empty corpus.
pub fn corpus_stats(tweets: &[TweetRecord]) -> Result<CorpusStats> {
    if tweets.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let total = tweets.len() as f64;

    let mut tweets_per_month: BTreeMap<Month, u64> = BTreeMap::new();
    let mut posts_per_user: BTreeMap<&str, u64> = BTreeMap::new();
    let mut lang_counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut followers_by_user: BTreeMap<&str, u64> = BTreeMap::new();
    let mut monthly_totals: BTreeMap<Month, (u64, u64, u64)> = BTreeMap::new();

    for t in tweets {
        let month = Month::of(t.created_at);
        *tweets_per_month.entry(month).or_insert(0) += 1;
        *posts_per_user.entry(&t.user_id).or_insert(0) += 1;
        *lang_counts.entry(t.lang.clone()).or_insert(0) += 1;
        if let Some(f) = t.user_followers {
            let entry = followers_by_user.entry(&t.user_id).or_insert(0);
            *entry = (*entry).max(f);
        }
        let (n, rts, likes) = monthly_totals.entry(month).or_insert((0, 0, 0));
        *n += 1;
        *rts += t.retweet_count;
        *likes += t.like_count;
    }

    let mut users_by_post_count: BTreeMap<u64, u64> = BTreeMap::new();
    for &count in posts_per_user.values() {
        *users_by_post_count.entry(count).or_insert(0) += 1;
    }

    let language_shares = lang_counts
        .into_iter()
        .map(|(lang, n)| (lang, n as f64 / total))
        .collect();

    let mean_followers = if followers_by_user.is_empty() {
        None
    } else {
        let sum: u64 = followers_by_user.values().sum();
        Some(sum as f64 / followers_by_user.len() as f64)
    };

    let monthly_engagement = monthly_totals
        .into_iter()
        .map(|(month, (n, rts, likes))| {
            (
                month,
                EngagementPoint {
                    mean_retweets: rts as f64 / n as f64,
                    mean_likes: likes as f64 / n as f64,
                },
            )
        })
        .collect();

    Ok(CorpusStats {
        tweets_per_month,
        users_by_post_count,
        language_shares,
        mean_followers,
        monthly_engagement,
    })
}
