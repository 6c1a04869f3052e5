//! The stance stages: `stance-rules`, `stance-train`, `stance-predict`,
//! `stance-report`.

use std::collections::BTreeMap;

use serde::Serialize;
use stancekit::analytics::{
    aggregate_user_stances_with_thresholds, classify_all, monthly_stance_series_with_thresholds,
    pre_post_transitions_with_thresholds,
};
use stancekit::report::{fmt_f64, fmt_opt_f64, write_csv, write_json};
use stancekit::stance::ml::{self, cross_validate, load_model, save_model_with_meta, TrainParams};
use stancekit::stance::rules::{classify_tweet_rules, comparative_share, user_stance_with_thresholds};
use stancekit::stance::{StanceLabel, StanceSource, TweetStance};
use stancekit::time::parse_timestamp;

use crate::artifacts::read_tweet_stances;
use crate::commands::{load_corpus_artifact, load_lexicon};
use crate::context::Ctx;
use crate::CliError;

#[derive(Serialize)]
struct RuleSummary {
    tweets_remain: u64,
    tweets_leave: u64,
    tweets_non_polarized: u64,
    tweets_no_signal: u64,
    si_coverage: f64,
    users_remain: u64,
    users_leave: u64,
    users_non_polarized: u64,
    user_shares: Option<(f64, f64)>,
}

/// Rule-only classification: coverage, per-tweet outcomes, and user stances
/// over rule-classified tweets alone.
pub fn rules(ctx: &mut Ctx) -> Result<(), CliError> {
    let records = load_corpus_artifact(ctx)?;
    let lexicon = load_lexicon(ctx)?;
    let meta = ctx.meta();
    let t = &ctx.config.thresholds;

    let outcomes: Vec<Option<StanceLabel>> = records
        .iter()
        .map(|r| classify_tweet_rules(&r.hashtags, &lexicon))
        .collect();

    write_csv(
        ctx.artifact("stance/rule_stances.csv")?,
        &meta,
        &["tweet_id", "outcome"],
        records.iter().zip(&outcomes).map(|(r, o)| {
            vec![r.id.clone(), o.map(|l| l.to_string()).unwrap_or_else(|| "NoSignal".into())]
        }),
    )?;

    let mut by_user: BTreeMap<&str, Vec<TweetStance>> = BTreeMap::new();
    for (record, outcome) in records.iter().zip(&outcomes) {
        if let Some(label) = outcome {
            by_user
                .entry(&record.user_id)
                .or_default()
                .push(TweetStance { label: *label, source: StanceSource::Rule });
        }
    }
    let users: Vec<(String, stancekit::stance::rules::UserStance)> = by_user
        .into_iter()
        .map(|(user, stances)| (user.to_string(), user_stance_with_thresholds(stances, t.stance_low, t.stance_high)))
        .collect();

    write_csv(
        ctx.artifact("stance/user_stances_rules.csv")?,
        &meta,
        &["user_id", "prt", "prl", "score", "label"],
        users.iter().map(|(id, u)| {
            vec![id.clone(), u.prt.to_string(), u.prl.to_string(), fmt_opt_f64(u.score), u.label.to_string()]
        }),
    )?;

    let mut tally = [0u64; 4];
    for outcome in &outcomes {
        match outcome {
            Some(label) => tally[label.index()] += 1,
            None => tally[3] += 1,
        }
    }
    let mut user_tally = [0u64; 3];
    for (_, u) in &users {
        user_tally[u.label.index()] += 1;
    }
    let summary = RuleSummary {
        tweets_remain: tally[0],
        tweets_leave: tally[1],
        tweets_non_polarized: tally[2],
        tweets_no_signal: tally[3],
        si_coverage: (tally[0] + tally[1] + tally[2]) as f64 / records.len().max(1) as f64,
        users_remain: user_tally[0],
        users_leave: user_tally[1],
        users_non_polarized: user_tally[2],
        user_shares: comparative_share(users.iter().map(|(_, u)| u)).ok(),
    };
    write_json(ctx.artifact("stance/rule_summary.json")?, &meta, &summary)?;

    ctx.finish_stage(
        "stance-rules",
        &["stance/rule_stances.csv", "stance/user_stances_rules.csv", "stance/rule_summary.json"],
    )
}

/// Train the linear model from the labeled CSV and cross-validate it.
pub fn train(ctx: &mut Ctx) -> Result<(), CliError> {
    let labels_path = ctx.config.labels.clone().ok_or_else(|| CliError::Config {
        key: "labels".into(),
        reason: "stance training needs a labeled CSV (set `labels` or pass --labels)".into(),
    })?;
    let labeled = ml::load_labeled_csv(&labels_path)?;
    let docs: Vec<_> = labeled
        .iter()
        .map(|row| (ml::tokenize(&row.text), row.label))
        .collect();
    let params = TrainParams {
        lambda: ctx.config.stance.lambda,
        epochs: ctx.config.stance.epochs,
        min_df: ctx.config.stance.min_df,
        seed: ctx.config.stance.seed,
    };

    let report = cross_validate(&docs, &params, ctx.config.stance.cv_folds)?;
    let model = ml::fit(&docs, &params)?;
    let meta = ctx.meta();
    let meta_map: BTreeMap<String, String> = meta.0.iter().cloned().collect();
    save_model_with_meta(&model, ctx.artifact("stance/model.json")?, Some(&meta_map))?;
    write_json(ctx.artifact("stance/cv_report.json")?, &meta, &report)?;
    write_csv(
        ctx.artifact("stance/cv_report.csv")?,
        &meta,
        &["class", "precision", "recall", "f1", "support"],
        report.per_class.iter().map(|c| {
            vec![
                c.label.to_string(),
                fmt_f64(c.precision),
                fmt_f64(c.recall),
                fmt_f64(c.f1),
                c.support.to_string(),
            ]
        }),
    )?;
    log::info!(
        "stance-train: weighted F1 {:.3}, macro OVR AUC {:.3} over {} folds",
        report.weighted_f1,
        report.macro_ovr_auc,
        report.folds
    );

    ctx.finish_stage(
        "stance-train",
        &["stance/model.json", "stance/cv_report.json", "stance/cv_report.csv"],
    )
}

#[derive(Serialize)]
struct MergedSummary {
    tweets_remain: u64,
    tweets_leave: u64,
    tweets_non_polarized: u64,
    tweets_by_rule: u64,
    tweets_by_model: u64,
    users_remain: u64,
    users_leave: u64,
    users_non_polarized: u64,
    user_shares: Option<(f64, f64)>,
}

/// Classify the whole corpus (rules first, model otherwise) and aggregate
/// per-user stances.
pub fn predict(ctx: &mut Ctx) -> Result<(), CliError> {
    let records = load_corpus_artifact(ctx)?;
    let model_path = ctx.require("stance/model.json", "stance-train")?;
    let model = load_model(&model_path)?;
    let lexicon = load_lexicon(ctx)?;
    let meta = ctx.meta();

    let stances = classify_all(&records, &lexicon, &model);
    write_csv(
        ctx.artifact("stance/tweet_stances.csv")?,
        &meta,
        &["tweet_id", "label", "source"],
        records.iter().zip(&stances).map(|(r, s)| {
            let source = match s.source {
                StanceSource::Rule => "Rule",
                StanceSource::Model => "Model",
            };
            vec![r.id.clone(), s.label.to_string(), source.to_string()]
        }),
    )?;

    let t = &ctx.config.thresholds;
    let users = aggregate_user_stances_with_thresholds(&records, &stances, t.stance_low, t.stance_high);
    write_csv(
        ctx.artifact("stance/user_stances.csv")?,
        &meta,
        &["user_id", "prt", "prl", "score", "label", "total_posts"],
        users.iter().map(|u| {
            vec![
                u.user_id.clone(),
                u.stance.prt.to_string(),
                u.stance.prl.to_string(),
                fmt_opt_f64(u.stance.score),
                u.stance.label.to_string(),
                u.total_posts.to_string(),
            ]
        }),
    )?;

    let mut tweet_tally = [0u64; 3];
    let mut by_rule = 0u64;
    for stance in &stances {
        tweet_tally[stance.label.index()] += 1;
        if stance.source == StanceSource::Rule {
            by_rule += 1;
        }
    }
    let mut user_tally = [0u64; 3];
    for user in &users {
        user_tally[user.stance.label.index()] += 1;
    }
    let summary = MergedSummary {
        tweets_remain: tweet_tally[0],
        tweets_leave: tweet_tally[1],
        tweets_non_polarized: tweet_tally[2],
        tweets_by_rule: by_rule,
        tweets_by_model: stances.len() as u64 - by_rule,
        users_remain: user_tally[0],
        users_leave: user_tally[1],
        users_non_polarized: user_tally[2],
        user_shares: comparative_share(users.iter().map(|u| &u.stance)).ok(),
    };
    write_json(ctx.artifact("stance/summary.json")?, &meta, &summary)?;

    ctx.finish_stage(
        "stance-predict",
        &["stance/tweet_stances.csv", "stance/user_stances.csv", "stance/summary.json"],
    )
}

/// Monthly stance series and pre/post-event transitions.
pub fn report(ctx: &mut Ctx) -> Result<(), CliError> {
    let records = load_corpus_artifact(ctx)?;
    let stances_path = ctx.require("stance/tweet_stances.csv", "stance-predict")?;
    let by_id = read_tweet_stances(&stances_path)?;
    let stances: Vec<TweetStance> = records
        .iter()
        .map(|r| {
            by_id.get(&r.id).copied().ok_or_else(|| {
                CliError::Other(anyhow::anyhow!("tweet {} missing from stance artifact", r.id))
            })
        })
        .collect::<Result<_, _>>()?;
    let meta = ctx.meta();
    let t = ctx.config.thresholds.clone();

    let series = monthly_stance_series_with_thresholds(&records, &stances, t.stance_low, t.stance_high);
    write_csv(
        ctx.artifact("stance/monthly_series.csv")?,
        &meta,
        &["month", "remain_share", "leave_share", "polarized_users"],
        series.iter().map(|(month, point)| {
            vec![
                month.to_string(),
                fmt_opt_f64(point.shares.map(|s| s.0)),
                fmt_opt_f64(point.shares.map(|s| s.1)),
                point.polarized_users.to_string(),
            ]
        }),
    )?;
    write_json(ctx.artifact("stance/monthly_series.json")?, &meta, &series)?;

    let event = parse_timestamp(&ctx.config.event_date)?;
    let transitions = pre_post_transitions_with_thresholds(&records, &stances, event, t.stance_low, t.stance_high)?;
    write_csv(
        ctx.artifact("stance/transitions.csv")?,
        &meta,
        &["pre", "post", "users"],
        StanceLabel::ALL.iter().flat_map(|pre| {
            let matrix = transitions.matrix;
            StanceLabel::ALL.iter().map(move |post| {
                vec![
                    pre.to_string(),
                    post.to_string(),
                    matrix[pre.index()][post.index()].to_string(),
                ]
            })
        }),
    )?;
    write_csv(
        ctx.artifact("stance/change_rates.csv")?,
        &meta,
        &["side", "change_rate"],
        [
            ("ProRemain", transitions.remain_change_rate),
            ("ProLeave", transitions.leave_change_rate),
        ]
        .iter()
        .map(|(side, rate)| vec![side.to_string(), fmt_opt_f64(*rate)]),
    )?;
    write_json(ctx.artifact("stance/transitions.json")?, &meta, &transitions)?;

    ctx.finish_stage(
        "stance-report",
        &[
            "stance/monthly_series.csv",
            "stance/monthly_series.json",
            "stance/transitions.csv",
            "stance/change_rates.csv",
            "stance/transitions.json",
        ],
    )
}
