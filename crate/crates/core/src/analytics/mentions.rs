//! Mention counting, categorization of heavily-mentioned accounts, and
//! comparative influence over time.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::TweetRecord;
use crate::error::{Error, Result};
use crate::time::Month;

/// Accounts mentioned strictly more than this many times are tracked by
/// default.
pub const DEFAULT_MENTION_THRESHOLD: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MentionCategory {
    Politician,
    News,
    CampaignParty,
    Uncategorized,
}

impl MentionCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            MentionCategory::Politician => "Politician",
            MentionCategory::News => "News",
            MentionCategory::CampaignParty => "CampaignParty",
            MentionCategory::Uncategorized => "Uncategorized",
        }
    }
}

/// Load a category CSV `handle,category` with category in
/// {politician, news, campaign_party}. Handles are lowercased, `@` stripped.
pub fn load_categories(path: impl AsRef<Path>) -> Result<BTreeMap<String, MentionCategory>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path.as_ref())?;
    let mut map = BTreeMap::new();
    for (idx, row) in reader.deserialize::<(String, String)>().enumerate() {
        let (handle, category) = row?;
        let category = match category.to_lowercase().as_str() {
            "politician" => MentionCategory::Politician,
            "news" => MentionCategory::News,
            "campaign_party" | "campaignparty" => MentionCategory::CampaignParty,
            other => {
                return Err(Error::MalformedRecord {
                    line_no: idx as u64 + 2,
                    reason: format!("unknown category {other:?} (expected politician, news, or campaign_party)"),
                })
            }
        };
        map.insert(handle.trim_start_matches('@').to_lowercase(), category);
    }
    Ok(map)
}

/// Mention counts per handle, with monthly breakdowns and categories for the
/// tracked (above-threshold) handles.
#[derive(Debug, Clone, Default, Serialize)]
pub struct MentionLedger {
    pub totals: BTreeMap<String, u64>,
    pub monthly: BTreeMap<String, BTreeMap<Month, u64>>,
    /// Categories of tracked handles; handles missing from the category file
    /// are `Uncategorized`.
    pub categories: BTreeMap<String, MentionCategory>,
    pub threshold: u64,
}

impl MentionLedger {
    /// Handles mentioned strictly more than the threshold, sorted.
    pub fn tracked(&self) -> Vec<&str> {
        self.totals
            .iter()
            .filter(|(_, &n)| n > self.threshold)
            .map(|(h, _)| h.as_str())
            .collect()
    }
}

/// Count @-mentions per handle (one per mentioning tweet) and join handles
/// above `threshold` with the category table.
pub fn mention_ledger(
    tweets: &[TweetRecord],
    categories: &BTreeMap<String, MentionCategory>,
    threshold: u64,
) -> MentionLedger {
    let mut ledger = MentionLedger { threshold, ..MentionLedger::default() };
    for tweet in tweets {
        let month = Month::of(tweet.created_at);
        for handle in &tweet.mentions {
            *ledger.totals.entry(handle.clone()).or_insert(0) += 1;
            *ledger.monthly.entry(handle.clone()).or_default().entry(month).or_insert(0) += 1;
        }
    }
    ledger.categories = ledger
        .totals
        .iter()
        .filter(|(_, &n)| n > threshold)
        .map(|(handle, _)| {
            let category = categories.get(handle).copied().unwrap_or(MentionCategory::Uncategorized);
            (handle.clone(), category)
        })
        .collect();
    ledger
}

/// Per month, each tracked handle's share of mentions among the tracked set.
/// Months where no tracked handle is mentioned are absent; present months
/// sum to 1.
pub fn influence_series(
    ledger: &MentionLedger,
    handles: &[String],
) -> Result<BTreeMap<Month, BTreeMap<String, f64>>> {
    for handle in handles {
        if !ledger.totals.contains_key(handle) {
            return Err(Error::invalid_parameter(
                "handles",
                format!("handle {handle:?} not present in the mention ledger"),
            ));
        }
    }
    let mut monthly_counts: BTreeMap<Month, BTreeMap<String, u64>> = BTreeMap::new();
    for handle in handles {
        if let Some(counts) = ledger.monthly.get(handle) {
            for (month, &n) in counts {
                *monthly_counts.entry(*month).or_default().entry(handle.clone()).or_insert(0) += n;
            }
        }
    }
    Ok(monthly_counts
        .into_iter()
        .map(|(month, counts)| {
            let total: u64 = counts.values().sum();
            let shares = counts
                .into_iter()
                .map(|(handle, n)| (handle, n as f64 / total as f64))
                .collect();
            (month, shares)
        })
        .collect())
}
