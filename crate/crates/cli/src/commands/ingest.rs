//! `ingest`: validate the raw corpus, apply language/window filters, and
//! write the normalized corpus plus the rejects report.

use serde::Serialize;
use stancekit::corpus::{filter_corpus, load_corpus};
use stancekit::report::{write_csv, write_json};
use stancekit::time::{parse_timestamp, TimeWindow};

use crate::artifacts::write_corpus_jsonl;
use crate::context::Ctx;
use crate::CliError;

#[derive(Serialize)]
struct IngestSummary {
    lines_loaded: usize,
    rejects: usize,
    kept_after_filters: usize,
    lang_filter: Option<String>,
    window_filter: Option<(String, String)>,
}

pub fn run(ctx: &mut Ctx) -> Result<(), CliError> {
    let input = ctx.config.input.clone().ok_or_else(|| CliError::Config {
        key: "input".into(),
        reason: "no corpus file given (set `input` or pass --input)".into(),
    })?;

    let loaded = load_corpus(&input, ctx.config.strict)?;
    let lines_loaded = loaded.records.len();

    let window = match (&ctx.config.from, &ctx.config.to) {
        (None, None) => None,
        (from, to) => {
            let start = from
                .as_deref()
                .map(parse_timestamp)
                .transpose()?
                .unwrap_or(chrono::DateTime::<chrono::Utc>::MIN_UTC);
            let end = to
                .as_deref()
                .map(parse_timestamp)
                .transpose()?
                .unwrap_or(chrono::DateTime::<chrono::Utc>::MAX_UTC);
            Some(TimeWindow::new(start, end)?)
        }
    };
    let records: Vec<_> = filter_corpus(loaded.records, ctx.config.lang.clone(), window).collect();

    let corpus_path = ctx.artifact("corpus.jsonl")?;
    write_corpus_jsonl(&corpus_path, &records)?;

    let meta = ctx.meta();
    let rejects_path = ctx.artifact("rejects.csv")?;
    write_csv(
        &rejects_path,
        &meta,
        &["line_no", "reason"],
        loaded.rejects.iter().map(|r| vec![r.line_no.to_string(), r.reason.clone()]),
    )?;

    let summary = IngestSummary {
        lines_loaded,
        rejects: loaded.rejects.len(),
        kept_after_filters: records.len(),
        lang_filter: ctx.config.lang.clone(),
        window_filter: window.map(|w| (w.start.to_rfc3339(), w.end.to_rfc3339())),
    };
    write_json(ctx.artifact("ingest.json")?, &meta, &summary)?;

    log::info!(
        "ingest: {} records kept, {} rejects",
        summary.kept_after_filters,
        summary.rejects
    );
    ctx.finish_stage("ingest", &["corpus.jsonl", "rejects.csv", "ingest.json"])
}
