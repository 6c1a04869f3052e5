//! Stance and sentiment shares per group (topic or mentioned account).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sentiment::SentimentLabel;
use crate::stance::StanceLabel;

/// Shares for one group: stance over its polarized tweets, sentiment over
/// its non-neutral tweets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupTab {
    pub n: u64,
    /// `(remain, leave)`; absent when the group has no polarized tweets.
    pub stance_shares: Option<(f64, f64)>,
    /// `(positive, negative)`; absent when the group has no non-neutral tweets.
    pub sentiment_shares: Option<(f64, f64)>,
}

/// Cross-tabulate stance and sentiment by group key.
///
/// `keys` maps tweet id to its group (a topic id or a mentioned handle);
/// every keyed tweet must appear in both `stances` and `sentiments`.
pub fn cross_tab(
    keys: &BTreeMap<String, String>,
    stances: &BTreeMap<String, StanceLabel>,
    sentiments: &BTreeMap<String, SentimentLabel>,
) -> Result<BTreeMap<String, GroupTab>> {
    #[derive(Default)]
    struct Tally {
        n: u64,
        remain: u64,
        leave: u64,
        positive: u64,
        negative: u64,
    }

    let mut groups: BTreeMap<&str, Tally> = BTreeMap::new();
    for (tweet_id, group) in keys {
        let stance = stances.get(tweet_id).ok_or_else(|| {
            Error::invalid_parameter("stances", format!("tweet {tweet_id:?} has no stance result"))
        })?;
        let sentiment = sentiments.get(tweet_id).ok_or_else(|| {
            Error::invalid_parameter("sentiments", format!("tweet {tweet_id:?} has no sentiment result"))
        })?;
        let tally = groups.entry(group).or_default();
        tally.n += 1;
        match stance {
            StanceLabel::ProRemain => tally.remain += 1,
            StanceLabel::ProLeave => tally.leave += 1,
            StanceLabel::NonPolarized => {}
        }
        match sentiment {
            SentimentLabel::Positive => tally.positive += 1,
            SentimentLabel::Negative => tally.negative += 1,
            SentimentLabel::Neutral => {}
        }
    }

    Ok(groups
        .into_iter()
        .map(|(group, t)| {
            let polarized = t.remain + t.leave;
            let stance_shares =
                (polarized > 0).then(|| (t.remain as f64 / polarized as f64, t.leave as f64 / polarized as f64));
            let non_neutral = t.positive + t.negative;
            let sentiment_shares = (non_neutral > 0)
                .then(|| (t.positive as f64 / non_neutral as f64, t.negative as f64 / non_neutral as f64));
            (group.to_string(), GroupTab { n: t.n, stance_shares, sentiment_shares })
        })
        .collect())
}
