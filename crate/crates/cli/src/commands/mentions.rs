//! `mentions`: mention totals, tracked-account categories, and influence
//! shares over time.

use std::collections::BTreeMap;

use stancekit::analytics::{influence_series, load_categories, mention_ledger};
use stancekit::report::{fmt_f64, write_csv, write_json};

use crate::commands::load_corpus_artifact;
use crate::context::Ctx;
use crate::CliError;

pub fn run(ctx: &mut Ctx) -> Result<(), CliError> {
    let records = load_corpus_artifact(ctx)?;
    let categories = match &ctx.config.categories {
        Some(path) => load_categories(path)?,
        None => BTreeMap::new(),
    };
    let ledger = mention_ledger(&records, &categories, ctx.config.thresholds.mention);
    let meta = ctx.meta();

    write_csv(
        ctx.artifact("mentions/totals.csv")?,
        &meta,
        &["handle", "total"],
        ledger.totals.iter().map(|(h, n)| vec![h.clone(), n.to_string()]),
    )?;
    write_json(ctx.artifact("mentions/totals.json")?, &meta, &ledger.totals)?;

    let tracked: Vec<String> = ledger.tracked().iter().map(|s| s.to_string()).collect();
    write_csv(
        ctx.artifact("mentions/tracked.csv")?,
        &meta,
        &["handle", "total", "category"],
        tracked.iter().map(|h| {
            vec![
                h.clone(),
                ledger.totals[h].to_string(),
                ledger.categories[h].as_str().to_string(),
            ]
        }),
    )?;

    write_csv(
        ctx.artifact("mentions/monthly.csv")?,
        &meta,
        &["handle", "month", "count"],
        tracked.iter().flat_map(|h| {
            ledger.monthly[h]
                .iter()
                .map(|(month, n)| vec![h.clone(), month.to_string(), n.to_string()])
                .collect::<Vec<_>>()
        }),
    )?;

    let series = influence_series(&ledger, &tracked)?;
    write_csv(
        ctx.artifact("mentions/influence.csv")?,
        &meta,
        &["month", "handle", "share"],
        series.iter().flat_map(|(month, shares)| {
            let month = month.to_string();
            shares
                .iter()
                .map(move |(handle, share)| vec![month.clone(), handle.clone(), fmt_f64(*share)])
                .collect::<Vec<_>>()
        }),
    )?;
    write_json(ctx.artifact("mentions/influence.json")?, &meta, &series)?;
    log::info!("mentions: {} handles tracked (> {} mentions)", tracked.len(), ledger.threshold);

    ctx.finish_stage(
        "mentions",
        &[
            "mentions/totals.csv",
            "mentions/totals.json",
            "mentions/tracked.csv",
            "mentions/monthly.csv",
            "mentions/influence.csv",
            "mentions/influence.json",
        ],
    )
}
