//! `bots`: join externally computed bot scores with user stances.

use stancekit::analytics::{aggregate_user_stances_with_thresholds, bot_stance_bins, BotScores};
use stancekit::report::{fmt_f64, fmt_opt_f64, write_csv, write_json};

use crate::artifacts::read_tweet_stances;
use crate::commands::load_corpus_artifact;
use crate::context::Ctx;
use crate::CliError;

pub fn run(ctx: &mut Ctx) -> Result<(), CliError> {
    let scores_path = ctx.config.bot_scores.clone().ok_or_else(|| CliError::Config {
        key: "bot_scores".into(),
        reason: "bot analysis needs a scores CSV (set `bot_scores` or pass --bot-scores)".into(),
    })?;
    let records = load_corpus_artifact(ctx)?;
    let stances_path = ctx.require("stance/tweet_stances.csv", "stance-predict")?;
    let by_id = read_tweet_stances(&stances_path)?;
    let stances: Vec<_> = records
        .iter()
        .map(|r| {
            by_id.get(&r.id).copied().ok_or_else(|| {
                CliError::Other(anyhow::anyhow!("tweet {} missing from stance artifact", r.id))
            })
        })
        .collect::<Result<_, _>>()?;

    let t = &ctx.config.thresholds;
    let users = aggregate_user_stances_with_thresholds(&records, &stances, t.stance_low, t.stance_high);
    let scores = BotScores::load(&scores_path)?;
    let report = bot_stance_bins(&users, &scores, t.bot_bin_width, t.bot)?;

    let meta = ctx.meta();
    write_csv(
        ctx.artifact("bots/bins.csv")?,
        &meta,
        &["bin_low", "bin_high", "users", "remain_share", "leave_share"],
        report.bins.iter().map(|bin| {
            vec![
                fmt_f64(bin.low),
                fmt_f64(bin.high),
                bin.users.to_string(),
                fmt_opt_f64(bin.shares.map(|s| s.0)),
                fmt_opt_f64(bin.shares.map(|s| s.1)),
            ]
        }),
    )?;
    write_json(ctx.artifact("bots/summary.json")?, &meta, &report)?;
    log::info!(
        "bots: {} users joined, bot fraction {:.3}",
        report.joined_users,
        report.bot_fraction
    );

    ctx.finish_stage("bots", &["bots/bins.csv", "bots/summary.json"])
}
