//! `pipeline`: every stage in dependency order. Bot and correlation stages
//! run only when their external inputs are configured.

use crate::commands;
use crate::context::Ctx;
use crate::CliError;

pub fn run(ctx: &mut Ctx) -> Result<(), CliError> {
    commands::ingest::run(ctx)?;
    commands::stats::run(ctx)?;
    commands::stance::train(ctx)?;
    commands::stance::rules(ctx)?;
    commands::stance::predict(ctx)?;
    commands::stance::report(ctx)?;
    commands::topics::run(ctx)?;
    commands::sentiment::run(ctx)?;
    commands::mentions::run(ctx)?;
    if ctx.config.bot_scores.is_some() {
        commands::bots::run(ctx)?;
    } else {
        log::info!("pipeline: no bot_scores configured, bots stage skipped");
    }
    commands::crosstab::run(ctx)?;
    if ctx.config.trend_series.is_some() {
        commands::correlate::run(ctx)?;
    } else {
        log::info!("pipeline: no trend_series configured, correlate stage skipped");
    }
    Ok(())
}
