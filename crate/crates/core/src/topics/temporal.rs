//! Temporal topic analytics: monthly topic shares, month-over-month change,
//! and change-driven period segmentation.

use std::collections::BTreeMap;

use chrono::{DateTime, Utc};

use crate::error::{Error, Result};
use crate::time::{Month, TimeWindow};
use crate::topics::lda::LdaModel;

/// Default number of period boundaries (four periods).
pub const DEFAULT_BOUNDARIES: usize = 3;

/// Per month, the share of tokens assigned to each topic. Documents are
/// matched to timestamps by position; each monthly vector sums to 1 and
/// months without documents are absent.
pub fn monthly_topic_shares(model: &LdaModel, timestamps: &[DateTime<Utc>]) -> Result<BTreeMap<Month, Vec<f64>>> {
    if timestamps.len() != model.num_docs() {
        return Err(Error::invalid_parameter(
            "timestamps",
            format!("{} timestamps for {} documents", timestamps.len(), model.num_docs()),
        ));
    }
    let mut token_counts: BTreeMap<Month, Vec<u64>> = BTreeMap::new();
    for (d, ts) in timestamps.iter().enumerate() {
        let month = Month::of(*ts);
        let entry = token_counts.entry(month).or_insert_with(|| vec![0; model.k]);
        for (k, &n) in model.doc_topic_counts[d].iter().enumerate() {
            entry[k] += n;
        }
    }
    Ok(token_counts
        .into_iter()
        .filter(|(_, counts)| counts.iter().sum::<u64>() > 0)
        .map(|(month, counts)| {
            let total: u64 = counts.iter().sum();
            let shares = counts.iter().map(|&n| n as f64 / total as f64).collect();
            (month, shares)
        })
        .collect())
}

/// Month-over-month change: the L1 distance between consecutive monthly
/// share vectors, keyed by the later month. The first month has no
/// predecessor and is absent.
pub fn monthly_change(shares: &BTreeMap<Month, Vec<f64>>) -> BTreeMap<Month, f64> {
    let mut change = BTreeMap::new();
    let mut prev: Option<&Vec<f64>> = None;
    for (month, vector) in shares {
        if let Some(previous) = prev {
            let l1: f64 = vector.iter().zip(previous).map(|(a, b)| (a - b).abs()).sum();
            change.insert(*month, l1);
        }
        prev = Some(vector);
    }
    change
}

/// Split the corpus span into contiguous periods at the months with the
/// highest share change.
///
/// The `n_boundaries` months with the largest L1 change start new periods
/// (ties break toward the earlier month), yielding `n_boundaries + 1`
/// windows that partition the span exactly. A constant series is degenerate:
/// the tie rule alone picks the boundaries and a warning is logged.
pub fn segment_periods(shares: &BTreeMap<Month, Vec<f64>>, n_boundaries: usize) -> Result<Vec<TimeWindow>> {
    if n_boundaries == 0 {
        return Err(Error::invalid_parameter("n_boundaries", "must be >= 1"));
    }
    if shares.len() < n_boundaries + 1 {
        return Err(Error::invalid_parameter(
            "n_boundaries",
            format!("{} boundaries need at least {} months, got {}", n_boundaries, n_boundaries + 1, shares.len()),
        ));
    }
    let change = monthly_change(shares);
    let mut ranked: Vec<(&Month, &f64)> = change.iter().collect();
    // Highest change first; earlier month wins ties (sort is stable and the
    // map iterates in ascending month order).
    ranked.sort_by(|a, b| b.1.partial_cmp(a.1).expect("change scores are finite"));
    if ranked.first().map(|(_, &c)| c) == ranked.last().map(|(_, &c)| c) {
        log::warn!("segment_periods: all change scores equal; boundaries degenerate to earliest months");
    }
    let mut boundaries: Vec<Month> = ranked[..n_boundaries].iter().map(|(m, _)| **m).collect();
    boundaries.sort();

    let first = *shares.keys().next().expect("non-empty");
    let last = *shares.keys().next_back().expect("non-empty");
    let mut cuts = Vec::with_capacity(n_boundaries + 2);
    cuts.push(first.start());
    cuts.extend(boundaries.iter().map(|m| m.start()));
    cuts.push(last.next().start());

    cuts.windows(2)
        .map(|pair| TimeWindow::new(pair[0], pair[1]))
        .collect()
}
