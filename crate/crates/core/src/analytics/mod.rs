//! Cross-cutting analyses over a classified corpus: the merged rule+model
//! stance pipeline, temporal series, pre/post transitions, bot joins,
//! mention analytics, cross-tabs, and correlation.

pub mod bots;
pub mod crosstab;
pub mod mentions;
pub mod stats;
pub mod temporal;

pub use bots::{bot_stance_bins, BotBin, BotScores, BotStanceReport, BOT_SCORE_THRESHOLD};
pub use crosstab::{cross_tab, GroupTab};
pub use mentions::{influence_series, load_categories, mention_ledger, MentionCategory, MentionLedger};
pub use stats::{load_series_csv, pearson};
pub use temporal::{
    monthly_stance_series, monthly_stance_series_with_thresholds, pre_post_transitions,
    pre_post_transitions_with_thresholds, MonthlyStancePoint, StanceTimeSeries, TransitionReport,
};

use serde::Serialize;

use crate::corpus::TweetRecord;
use crate::stance::ml::svm::LinearStanceModel;
use crate::stance::ml::tokenize::tokenize;
use crate::stance::rules::{classify_tweet_rules, user_stance_with_thresholds, HashtagLexicon, UserStance};
use crate::stance::{StanceSource, TweetStance};

/// Classify every tweet: the hashtag rule when it fires, the learned model
/// otherwise. Output is aligned with the input.
pub fn classify_all(
    tweets: &[TweetRecord],
    lexicon: &HashtagLexicon,
    model: &LinearStanceModel,
) -> Vec<TweetStance> {
    tweets
        .iter()
        .map(|tweet| match classify_tweet_rules(&tweet.hashtags, lexicon) {
            Some(label) => TweetStance { label, source: StanceSource::Rule },
            None => {
                let (label, _) = crate::stance::ml::svm::predict(model, &tokenize(&tweet.text));
                TweetStance { label, source: StanceSource::Model }
            }
        })
        .collect()
}

/// A user's corpus-wide stance plus the post count behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UserAggregate {
    pub user_id: String,
    pub stance: UserStance,
    pub total_posts: u64,
}

/// Fold per-tweet stances into per-user aggregates, sorted by user id.
/// `stances` must be aligned with `tweets`.
pub fn aggregate_user_stances(tweets: &[TweetRecord], stances: &[TweetStance]) -> Vec<UserAggregate> {
    aggregate_user_stances_with_thresholds(
        tweets,
        stances,
        crate::stance::rules::USER_SCORE_LEAVE_BELOW,
        crate::stance::rules::USER_SCORE_REMAIN_ABOVE,
    )
}

/// [`aggregate_user_stances`] with explicit user-score thresholds.
pub fn aggregate_user_stances_with_thresholds(
    tweets: &[TweetRecord],
    stances: &[TweetStance],
    leave_below: f64,
    remain_above: f64,
) -> Vec<UserAggregate> {
    assert_eq!(tweets.len(), stances.len(), "stances must align with tweets");
    let mut by_user: std::collections::BTreeMap<&str, Vec<TweetStance>> = std::collections::BTreeMap::new();
    for (tweet, stance) in tweets.iter().zip(stances) {
        by_user.entry(&tweet.user_id).or_default().push(*stance);
    }
    by_user
        .into_iter()
        .map(|(user_id, stances)| UserAggregate {
            user_id: user_id.to_string(),
            total_posts: stances.len() as u64,
            stance: user_stance_with_thresholds(stances, leave_below, remain_above),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stance::ml::{fit, TrainParams};
    use crate::stance::StanceLabel;
    use crate::time::parse_timestamp;
    use std::collections::BTreeSet;

    fn tweet(id: &str, user: &str, text: &str) -> TweetRecord {
        TweetRecord {
            id: id.into(),
            user_id: user.into(),
            created_at: parse_timestamp("2016-03-01").unwrap(),
            text: text.into(),
            lang: "en".into(),
            retweet_count: 0,
            like_count: 0,
            hashtags: crate::corpus::hashtags_in_text(text),
            mentions: BTreeSet::new(),
            user_followers: None,
        }
    }

    fn toy_model() -> LinearStanceModel {
        let labeled = vec![
            (tokenize("stay stay europe"), StanceLabel::ProRemain),
            (tokenize("quit quit eu"), StanceLabel::ProLeave),
            (tokenize("weather is nice"), StanceLabel::NonPolarized),
            (tokenize("stay europe strong"), StanceLabel::ProRemain),
            (tokenize("quit the eu now"), StanceLabel::ProLeave),
            (tokenize("nice weather today"), StanceLabel::NonPolarized),
        ];
        fit(&labeled, &TrainParams { min_df: 1, ..TrainParams::default() }).unwrap()
    }

    #[test]
    fn rule_tweets_never_consult_the_model() {
        let lexicon = HashtagLexicon::bundled();
        let model = toy_model();
        let tweets = vec![tweet("1", "a", "#voteleave and that is that")];
        let stances = classify_all(&tweets, &lexicon, &model);
        assert_eq!(stances[0], TweetStance { label: StanceLabel::ProLeave, source: StanceSource::Rule });
    }

    #[test]
    fn no_signal_tweets_get_model_prediction() {
        let lexicon = HashtagLexicon::bundled();
        let model = toy_model();
        let tweets = vec![tweet("1", "a", "stay europe strong")];
        let stances = classify_all(&tweets, &lexicon, &model);
        assert_eq!(stances[0].source, StanceSource::Model);
        assert_eq!(stances[0].label, StanceLabel::ProRemain);
    }

    #[test]
    fn source_partition_matches_si_hashtag_partition() {
        let lexicon = HashtagLexicon::bundled();
        let model = toy_model();
        let mut tweets = Vec::new();
        for i in 0..100 {
            // Exactly 8 of 100 tweets carry a stance-indicative hashtag.
            let text = if i % 100 < 8 {
                if i % 2 == 0 { "so done #voteleave" } else { "here we go #voteremain" }
            } else if i % 3 == 0 {
                "stay europe strong #euref"
            } else {
                "weather is nice"
            };
            tweets.push(tweet(&i.to_string(), &format!("u{i}"), text));
        }
        let stances = classify_all(&tweets, &lexicon, &model);
        assert_eq!(stances.len(), tweets.len());
        for (tweet, stance) in tweets.iter().zip(&stances) {
            let has_si = tweet.hashtags.iter().any(|h| lexicon.remain.contains(h) || lexicon.leave.contains(h));
            assert_eq!(stance.source == StanceSource::Rule, has_si);
        }
        let rule_count = stances.iter().filter(|s| s.source == StanceSource::Rule).count();
        assert_eq!(rule_count, 8);
    }

    #[test]
    fn user_aggregation_counts_posts_and_scores() {
        let lexicon = HashtagLexicon::bundled();
        let model = toy_model();
        let tweets = vec![
            tweet("1", "alice", "#voteremain"),
            tweet("2", "alice", "#voteremain again"),
            tweet("3", "alice", "#voteleave hmm"),
            tweet("4", "bob", "weather is nice"),
        ];
        let stances = classify_all(&tweets, &lexicon, &model);
        let users = aggregate_user_stances(&tweets, &stances);
        assert_eq!(users.len(), 2);
        assert_eq!(users[0].user_id, "alice");
        assert_eq!(users[0].total_posts, 3);
        assert_eq!(users[0].stance.prt, 2);
        assert_eq!(users[0].stance.prl, 1);
        assert_eq!(users[1].user_id, "bob");
    }
}
