//! `correlate`: Pearson correlation of monthly tweet volume against an
//! external monthly series.

use serde::Serialize;
use stancekit::analytics::stats::{join_monthly, load_series_csv, pearson};
use stancekit::report::{fmt_f64, write_csv, write_json};

use crate::context::Ctx;
use crate::CliError;

#[derive(Serialize)]
struct CorrelationReport {
    months_joined: usize,
    pearson: f64,
}

pub fn run(ctx: &mut Ctx) -> Result<(), CliError> {
    let trend_path = ctx.config.trend_series.clone().ok_or_else(|| CliError::Config {
        key: "trend_series".into(),
        reason: "correlation needs an external series CSV (set `trend_series` or pass --trend-series)".into(),
    })?;
    let volume_path = ctx.require("stats/tweets_per_month.csv", "stats")?;

    let volume = load_series_csv(&volume_path)?;
    let trend = load_series_csv(&trend_path)?;
    let (xs, ys) = join_monthly(&volume, &trend);
    let r = pearson(&xs, &ys)?;

    let meta = ctx.meta();
    let report = CorrelationReport { months_joined: xs.len(), pearson: r };
    write_csv(
        ctx.artifact("correlate/pearson.csv")?,
        &meta,
        &["months_joined", "pearson"],
        vec![vec![report.months_joined.to_string(), fmt_f64(report.pearson)]],
    )?;
    write_json(ctx.artifact("correlate/pearson.json")?, &meta, &report)?;
    log::info!("correlate: r = {:.4} over {} months", r, xs.len());

    ctx.finish_stage("correlate", &["correlate/pearson.csv", "correlate/pearson.json"])
}
