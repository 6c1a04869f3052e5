//! `topics`: influence filtering, preprocessing, full-period LDA, change
//! segmentation, per-period LDA, top words, and coherence.

use std::collections::{BTreeMap, HashMap};

use chrono::{DateTime, Utc};
use serde::Serialize;
use stancekit::corpus::{influence_filter, TweetRecord};
use stancekit::report::{fmt_f64, write_csv, write_json};
use stancekit::time::TimeWindow;
use stancekit::topics::{
    load_lemmas, load_stopwords, monthly_change, monthly_topic_shares, preprocess, segment_periods,
    top_words, train_lda, umass_coherence, BigramParams, Dictionary, Document, LdaModel, LdaParams,
};

use crate::commands::load_corpus_artifact;
use crate::context::Ctx;
use crate::CliError;

struct PeriodRun {
    name: String,
    window: Option<TimeWindow>,
    model: LdaModel,
    docs: Vec<Document>,
}

#[derive(Serialize)]
struct PeriodEntry {
    period: String,
    start: Option<String>,
    end: Option<String>,
    documents: usize,
}

pub fn run(ctx: &mut Ctx) -> Result<(), CliError> {
    let records = load_corpus_artifact(ctx)?;
    let t = &ctx.config.thresholds;
    let filtered: Vec<TweetRecord> =
        influence_filter(records, t.min_retweets, t.min_words).collect();
    if filtered.is_empty() {
        return Err(CliError::Other(anyhow::anyhow!(
            "no tweets left after the influence filter (retweets >= {}, words >= {})",
            t.min_retweets,
            t.min_words
        )));
    }

    let stopwords = match &ctx.config.stopwords {
        Some(path) => load_stopwords(path)?,
        None => stancekit::topics::bundled_stopwords(),
    };
    let lemmas = match &ctx.config.lemmas {
        Some(path) => load_lemmas(path)?,
        None => stancekit::topics::bundled_lemmas(),
    };
    let bigrams = BigramParams {
        min_count: ctx.config.bigrams.min_count,
        threshold: ctx.config.bigrams.threshold,
    };
    let (dictionary, documents) = preprocess(&filtered, &stopwords, &lemmas, bigrams);
    if documents.is_empty() {
        return Err(CliError::Other(anyhow::anyhow!("preprocessing emptied every document")));
    }

    let created_at: HashMap<&str, DateTime<Utc>> =
        filtered.iter().map(|r| (r.id.as_str(), r.created_at)).collect();
    let timestamps: Vec<DateTime<Utc>> = documents
        .iter()
        .map(|d| created_at[d.tweet_id.as_str()])
        .collect();

    let lda = &ctx.config.lda;
    let params = LdaParams {
        k: lda.k,
        alpha: lda.effective_alpha(),
        beta: lda.beta,
        iterations: lda.iterations,
        seed: lda.seed,
    };
    log::info!(
        "topics: {} documents, {} terms, K={}, {} sweeps",
        documents.len(),
        dictionary.len(),
        params.k,
        params.iterations
    );
    let full_model = train_lda(&documents, dictionary.len(), &params)?;

    let shares = monthly_topic_shares(&full_model, &timestamps)?;
    let change = monthly_change(&shares);
    let meta = ctx.meta();

    write_csv(
        ctx.artifact("topics/monthly_shares.csv")?,
        &meta,
        &["month", "topic", "share"],
        shares.iter().flat_map(|(month, vector)| {
            let month = month.to_string();
            vector
                .iter()
                .enumerate()
                .map(move |(topic, share)| vec![month.clone(), topic.to_string(), fmt_f64(*share)])
                .collect::<Vec<_>>()
        }),
    )?;
    write_json(ctx.artifact("topics/monthly_shares.json")?, &meta, &shares)?;
    write_csv(
        ctx.artifact("topics/monthly_change.csv")?,
        &meta,
        &["month", "change"],
        change.iter().map(|(month, value)| vec![month.to_string(), fmt_f64(*value)]),
    )?;
    write_json(ctx.artifact("topics/monthly_change.json")?, &meta, &change)?;

    // Segmented runs: periods from the change series, one model per period.
    let boundaries = ctx.config.segmentation.boundaries;
    let mut runs = vec![PeriodRun {
        name: "full".to_string(),
        window: None,
        model: full_model,
        docs: documents.clone(),
    }];
    if shares.len() >= boundaries + 1 {
        let windows = segment_periods(&shares, boundaries)?;
        for (i, window) in windows.iter().enumerate() {
            let doc_idx: Vec<usize> = (0..documents.len())
                .filter(|&d| window.contains(timestamps[d]))
                .collect();
            if doc_idx.is_empty() {
                log::warn!("topics: period p{} has no documents, skipped", i + 1);
                continue;
            }
            let docs: Vec<Document> = doc_idx.iter().map(|&d| documents[d].clone()).collect();
            let period_params = LdaParams { seed: params.seed.wrapping_add(i as u64 + 1), ..params };
            let model = train_lda(&docs, dictionary.len(), &period_params)?;
            runs.push(PeriodRun {
                name: format!("p{}", i + 1),
                window: Some(*window),
                model,
                docs,
            });
        }
    } else {
        log::warn!(
            "topics: only {} months of shares, need {} for {} boundaries; segmentation skipped",
            shares.len(),
            boundaries + 1,
            boundaries
        );
    }

    write_periods(ctx, &meta, &runs)?;
    write_top_words(ctx, &meta, &dictionary, &runs)?;
    write_coherence(ctx, &meta, &runs)?;
    write_doc_topics(ctx, &meta, &runs[0])?;
    write_json(ctx.artifact("topics/dictionary.json")?, &meta, &dictionary)?;
    for run in &runs {
        write_json(ctx.artifact(&format!("topics/model_{}.json", run.name))?, &meta, &run.model)?;
    }

    ctx.finish_stage(
        "topics",
        &[
            "topics/monthly_shares.csv",
            "topics/monthly_shares.json",
            "topics/monthly_change.csv",
            "topics/monthly_change.json",
            "topics/periods.csv",
            "topics/periods.json",
            "topics/top_words.csv",
            "topics/top_words.json",
            "topics/coherence.csv",
            "topics/coherence.json",
            "topics/doc_topics.csv",
            "topics/dictionary.json",
            "topics/model_full.json",
        ],
    )
}

fn write_periods(ctx: &Ctx, meta: &stancekit::report::ReportMeta, runs: &[PeriodRun]) -> Result<(), CliError> {
    let entries: Vec<PeriodEntry> = runs
        .iter()
        .map(|run| PeriodEntry {
            period: run.name.clone(),
            start: run.window.map(|w| w.start.to_rfc3339()),
            end: run.window.map(|w| w.end.to_rfc3339()),
            documents: run.docs.len(),
        })
        .collect();
    write_csv(
        ctx.artifact("topics/periods.csv")?,
        meta,
        &["period", "start", "end", "documents"],
        entries.iter().map(|e| {
            vec![
                e.period.clone(),
                e.start.clone().unwrap_or_default(),
                e.end.clone().unwrap_or_default(),
                e.documents.to_string(),
            ]
        }),
    )?;
    write_json(ctx.artifact("topics/periods.json")?, meta, &entries)?;
    Ok(())
}

fn write_top_words(
    ctx: &Ctx,
    meta: &stancekit::report::ReportMeta,
    dictionary: &Dictionary,
    runs: &[PeriodRun],
) -> Result<(), CliError> {
    let top_n = ctx.config.lda.top_n;
    let mut rows = Vec::new();
    let mut dump: BTreeMap<String, Vec<stancekit::topics::TopicSummary>> = BTreeMap::new();
    for run in runs {
        let mut summaries = Vec::with_capacity(run.model.k);
        for topic in 0..run.model.k {
            let summary = top_words(&run.model, dictionary, topic, top_n)?;
            for (rank, (term, probability)) in summary.top_words.iter().enumerate() {
                rows.push(vec![
                    run.name.clone(),
                    topic.to_string(),
                    (rank + 1).to_string(),
                    term.clone(),
                    fmt_f64(*probability),
                ]);
            }
            summaries.push(summary);
        }
        dump.insert(run.name.clone(), summaries);
    }
    write_csv(
        ctx.artifact("topics/top_words.csv")?,
        meta,
        &["period", "topic", "rank", "term", "probability"],
        rows,
    )?;
    write_json(ctx.artifact("topics/top_words.json")?, meta, &dump)?;
    Ok(())
}

fn write_coherence(ctx: &Ctx, meta: &stancekit::report::ReportMeta, runs: &[PeriodRun]) -> Result<(), CliError> {
    let top_n = ctx.config.lda.top_n;
    let mut rows = Vec::new();
    let mut dump: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for run in runs {
        let mut scores = Vec::with_capacity(run.model.k);
        for topic in 0..run.model.k {
            let score = umass_coherence(&run.model, &run.docs, topic, top_n)?;
            rows.push(vec![run.name.clone(), topic.to_string(), fmt_f64(score)]);
            scores.push(score);
        }
        dump.insert(run.name.clone(), scores);
    }
    write_csv(ctx.artifact("topics/coherence.csv")?, meta, &["period", "topic", "coherence"], rows)?;
    write_json(ctx.artifact("topics/coherence.json")?, meta, &dump)?;
    Ok(())
}

fn write_doc_topics(ctx: &Ctx, meta: &stancekit::report::ReportMeta, full: &PeriodRun) -> Result<(), CliError> {
    write_csv(
        ctx.artifact("topics/doc_topics.csv")?,
        meta,
        &["tweet_id", "topic"],
        full.docs
            .iter()
            .enumerate()
            .map(|(d, doc)| vec![doc.tweet_id.clone(), full.model.dominant_topic(d).to_string()]),
    )?;
    Ok(())
}
