//! `stats`: descriptive corpus statistics.

use serde::Serialize;
use stancekit::corpus::corpus_stats;
use stancekit::report::{fmt_f64, write_csv, write_json};

use crate::commands::load_corpus_artifact;
use crate::context::Ctx;
use crate::CliError;

#[derive(Serialize)]
struct StatsSummary<'a> {
    tweets: usize,
    distinct_users: u64,
    mean_followers: Option<f64>,
    language_shares: &'a std::collections::BTreeMap<String, f64>,
}

pub fn run(ctx: &mut Ctx) -> Result<(), CliError> {
    let records = load_corpus_artifact(ctx)?;
    let stats = corpus_stats(&records)?;
    let meta = ctx.meta();

    write_csv(
        ctx.artifact("stats/tweets_per_month.csv")?,
        &meta,
        &["month", "count"],
        stats.tweets_per_month.iter().map(|(m, n)| vec![m.to_string(), n.to_string()]),
    )?;
    write_json(ctx.artifact("stats/tweets_per_month.json")?, &meta, &stats.tweets_per_month)?;

    write_csv(
        ctx.artifact("stats/user_post_histogram.csv")?,
        &meta,
        &["posts", "users"],
        stats.users_by_post_count.iter().map(|(k, v)| vec![k.to_string(), v.to_string()]),
    )?;
    write_json(ctx.artifact("stats/user_post_histogram.json")?, &meta, &stats.users_by_post_count)?;

    write_csv(
        ctx.artifact("stats/language_shares.csv")?,
        &meta,
        &["lang", "share"],
        stats.language_shares.iter().map(|(l, s)| vec![l.clone(), fmt_f64(*s)]),
    )?;
    write_json(ctx.artifact("stats/language_shares.json")?, &meta, &stats.language_shares)?;

    write_csv(
        ctx.artifact("stats/monthly_engagement.csv")?,
        &meta,
        &["month", "mean_retweets", "mean_likes"],
        stats
            .monthly_engagement
            .iter()
            .map(|(m, e)| vec![m.to_string(), fmt_f64(e.mean_retweets), fmt_f64(e.mean_likes)]),
    )?;
    write_json(ctx.artifact("stats/monthly_engagement.json")?, &meta, &stats.monthly_engagement)?;

    let summary = StatsSummary {
        tweets: records.len(),
        distinct_users: stats.users_by_post_count.values().sum(),
        mean_followers: stats.mean_followers,
        language_shares: &stats.language_shares,
    };
    write_json(ctx.artifact("stats/summary.json")?, &meta, &summary)?;

    ctx.finish_stage(
        "stats",
        &[
            "stats/tweets_per_month.csv",
            "stats/tweets_per_month.json",
            "stats/user_post_histogram.csv",
            "stats/user_post_histogram.json",
            "stats/language_shares.csv",
            "stats/language_shares.json",
            "stats/monthly_engagement.csv",
            "stats/monthly_engagement.json",
            "stats/summary.json",
        ],
    )
}
