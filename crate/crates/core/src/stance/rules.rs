//! Rule-based stance classification over stance-indicative hashtags, and
//! user-level aggregation of tweet stances.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stance::{StanceLabel, TweetStance};

/// Stance-indicative and stance-ambiguous hashtags, lowercase, no `#`.
///
/// The `remain` and `leave` sets carry stance signal; `ambiguous` hashtags
/// are topic markers that signal neither side.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HashtagLexicon {
    pub remain: BTreeSet<String>,
    pub leave: BTreeSet<String>,
    pub ambiguous: BTreeSet<String>,
}

impl HashtagLexicon {
    pub fn new(
        remain: BTreeSet<String>,
        leave: BTreeSet<String>,
        ambiguous: BTreeSet<String>,
    ) -> Result<Self> {
        let lexicon = HashtagLexicon { remain, leave, ambiguous };
        lexicon.validate()?;
        Ok(lexicon)
    }

    /// The built-in Brexit referendum lexicon.
    pub fn bundled() -> Self {
        serde_json::from_str(include_str!("../data/si_hashtags.json"))
            .expect("bundled lexicon parses")
    }

    /// Load a lexicon from a JSON file `{"remain":[...],"leave":[...],"ambiguous":[...]}`.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let lexicon: HashtagLexicon = serde_json::from_str(&text)?;
        lexicon.validate()?;
        Ok(lexicon)
    }

    /// The three sets must be pairwise disjoint, lowercase, and `#`-free.
    pub fn validate(&self) -> Result<()> {
        for (name, set) in [("remain", &self.remain), ("leave", &self.leave), ("ambiguous", &self.ambiguous)] {
            for tag in set {
                if tag.starts_with('#') || *tag != tag.to_lowercase() {
                    return Err(Error::InvalidLexicon(format!(
                        "{name} entry {tag:?} must be lowercase without '#'"
                    )));
                }
            }
        }
        for (a, b, tag) in [
            ("remain", "leave", self.remain.intersection(&self.leave).next()),
            ("remain", "ambiguous", self.remain.intersection(&self.ambiguous).next()),
            ("leave", "ambiguous", self.leave.intersection(&self.ambiguous).next()),
        ] {
            if let Some(tag) = tag {
                return Err(Error::InvalidLexicon(format!(
                    "hashtag {tag:?} appears in both {a} and {b}"
                )));
            }
        }
        Ok(())
    }
}

/// Classify one tweet from its hashtag set.
///
/// Returns `Some(ProRemain)` for at least one remain hashtag and no leave
/// hashtag, `Some(ProLeave)` for the mirror case, `Some(NonPolarized)` when
/// both sides appear, and `None` when the tweet carries no stance-indicative
/// hashtag at all (the caller routes such tweets to the learned model).
pub fn classify_tweet_rules(hashtags: &BTreeSet<String>, lexicon: &HashtagLexicon) -> Option<StanceLabel> {
    let has_remain = hashtags.iter().any(|h| lexicon.remain.contains(h));
    let has_leave = hashtags.iter().any(|h| lexicon.leave.contains(h));
    match (has_remain, has_leave) {
        (true, false) => Some(StanceLabel::ProRemain),
        (false, true) => Some(StanceLabel::ProLeave),
        (true, true) => Some(StanceLabel::NonPolarized),
        (false, false) => None,
    }
}

/// A user's aggregated stance over their classified tweets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserStance {
    /// Number of pro-remain tweets.
    pub prt: u64,
    /// Number of pro-leave tweets.
    pub prl: u64,
    /// `prt / (prt + prl)`; undefined when the user has no polarized tweets.
    pub score: Option<f64>,
    pub label: StanceLabel,
}

/// Score threshold below which a user is pro-leave (strict).
pub const USER_SCORE_LEAVE_BELOW: f64 = 0.4;
/// Score threshold above which a user is pro-remain (strict).
pub const USER_SCORE_REMAIN_ABOVE: f64 = 0.6;

/// Aggregate tweet stances into a [`UserStance`] with the default 0.4/0.6
/// thresholds.
pub fn user_stance(tweet_stances: impl IntoIterator<Item = TweetStance>) -> UserStance {
    user_stance_with_thresholds(tweet_stances, USER_SCORE_LEAVE_BELOW, USER_SCORE_REMAIN_ABOVE)
}

/// Aggregate with explicit thresholds: label is ProLeave iff score < `leave_below`,
/// ProRemain iff score > `remain_above`, NonPolarized otherwise (including the
/// no-polarized-tweets case, where the score is undefined).
pub fn user_stance_with_thresholds(
    tweet_stances: impl IntoIterator<Item = TweetStance>,
    leave_below: f64,
    remain_above: f64,
) -> UserStance {
    let mut prt = 0u64;
    let mut prl = 0u64;
    for stance in tweet_stances {
        match stance.label {
            StanceLabel::ProRemain => prt += 1,
            StanceLabel::ProLeave => prl += 1,
            StanceLabel::NonPolarized => {}
        }
    }
    let score = (prt + prl > 0).then(|| prt as f64 / (prt + prl) as f64);
    let label = match score {
        Some(s) if s < leave_below => StanceLabel::ProLeave,
        Some(s) if s > remain_above => StanceLabel::ProRemain,
        _ => StanceLabel::NonPolarized,
    };
    UserStance { prt, prl, score, label }
}

/// Share of each polarized side among polarized users:
/// `(#ProRemain, #ProLeave)` each divided by their sum.
pub fn comparative_share<'a>(users: impl IntoIterator<Item = &'a UserStance>) -> Result<(f64, f64)> {
    let mut remain = 0u64;
    let mut leave = 0u64;
    for user in users {
        match user.label {
            StanceLabel::ProRemain => remain += 1,
            StanceLabel::ProLeave => leave += 1,
            StanceLabel::NonPolarized => {}
        }
    }
    let total = remain + leave;
    if total == 0 {
        return Err(Error::NoPolarizedUsers);
    }
    Ok((remain as f64 / total as f64, leave as f64 / total as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stance::StanceSource;
    use proptest::prelude::*;

    fn tags(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn stances(prt: u64, prl: u64) -> Vec<TweetStance> {
        let mut v = Vec::new();
        for _ in 0..prt {
            v.push(TweetStance { label: StanceLabel::ProRemain, source: StanceSource::Rule });
        }
        for _ in 0..prl {
            v.push(TweetStance { label: StanceLabel::ProLeave, source: StanceSource::Rule });
        }
        v
    }

    #[test]
    fn bundled_lexicon_is_valid() {
        let lexicon = HashtagLexicon::bundled();
        lexicon.validate().unwrap();
        assert!(lexicon.remain.contains("voteremain"));
        assert!(lexicon.leave.contains("voteleave"));
        assert!(lexicon.leave.contains("takebackcontrol"));
        assert!(lexicon.ambiguous.contains("euref"));
    }

    #[test]
    fn remain_tag_with_neutral_tag_is_pro_remain() {
        let lexicon = HashtagLexicon::bundled();
        assert_eq!(
            classify_tweet_rules(&tags(&["voteremain", "brexit"]), &lexicon),
            Some(StanceLabel::ProRemain)
        );
    }

    #[test]
    fn both_sides_is_non_polarized() {
        let lexicon = HashtagLexicon::bundled();
        assert_eq!(
            classify_tweet_rules(&tags(&["voteleave", "strongerin"]), &lexicon),
            Some(StanceLabel::NonPolarized)
        );
    }

    #[test]
    fn ambiguous_only_is_no_signal() {
        let lexicon = HashtagLexicon::bundled();
        assert_eq!(classify_tweet_rules(&tags(&["euref"]), &lexicon), None);
    }

    #[test]
    fn leave_only_is_pro_leave() {
        let lexicon = HashtagLexicon::bundled();
        assert_eq!(
            classify_tweet_rules(&tags(&["leaveeu"]), &lexicon),
            Some(StanceLabel::ProLeave)
        );
    }

    #[test]
    fn overlapping_lexicon_rejected() {
        let err = HashtagLexicon::new(tags(&["x"]), tags(&["x"]), tags(&[])).unwrap_err();
        assert!(matches!(err, Error::InvalidLexicon(_)));
    }

    #[test]
    fn uppercase_lexicon_entry_rejected() {
        let err = HashtagLexicon::new(tags(&["VoteRemain"]), tags(&[]), tags(&[])).unwrap_err();
        assert!(matches!(err, Error::InvalidLexicon(_)));
    }

    #[test]
    fn user_stance_formula() {
        let u = user_stance(stances(3, 1));
        assert_eq!(u.score, Some(0.75));
        assert_eq!(u.label, StanceLabel::ProRemain);

        let u = user_stance(stances(1, 1));
        assert_eq!(u.score, Some(0.5));
        assert_eq!(u.label, StanceLabel::NonPolarized);

        let u = user_stance(stances(0, 5));
        assert_eq!(u.score, Some(0.0));
        assert_eq!(u.label, StanceLabel::ProLeave);
    }

    #[test]
    fn user_stance_no_polarized_tweets() {
        let neutral = vec![TweetStance { label: StanceLabel::NonPolarized, source: StanceSource::Model }];
        let u = user_stance(neutral);
        assert_eq!(u.score, None);
        assert_eq!(u.label, StanceLabel::NonPolarized);
        assert_eq!((u.prt, u.prl), (0, 0));
    }

    #[test]
    fn thresholds_are_strict() {
        // score exactly 0.4 -> NonPolarized
        let u = user_stance(stances(2, 3));
        assert_eq!(u.score, Some(0.4));
        assert_eq!(u.label, StanceLabel::NonPolarized);
        // score exactly 0.6 -> NonPolarized
        let u = user_stance(stances(3, 2));
        assert_eq!(u.score, Some(0.6));
        assert_eq!(u.label, StanceLabel::NonPolarized);
    }

    #[test]
    fn comparative_share_counts_only_polarized() {
        let users = vec![
            user_stance(stances(5, 0)),
            user_stance(stances(4, 0)),
            user_stance(stances(0, 3)),
            user_stance(stances(1, 1)), // NonPolarized, excluded
        ];
        let (remain, leave) = comparative_share(&users).unwrap();
        assert!((remain - 2.0 / 3.0).abs() < 1e-12);
        assert!((leave - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn comparative_share_table_shapes() {
        let mut users = Vec::new();
        for _ in 0..62 {
            users.push(user_stance(stances(1, 0)));
        }
        for _ in 0..38 {
            users.push(user_stance(stances(0, 1)));
        }
        let (remain, leave) = comparative_share(&users).unwrap();
        assert_eq!((remain, leave), (0.62, 0.38));

        // 432K remain / 309K leave, scaled down by 1000.
        let mut users = Vec::new();
        for _ in 0..432 {
            users.push(user_stance(stances(1, 0)));
        }
        for _ in 0..309 {
            users.push(user_stance(stances(0, 1)));
        }
        let (remain, leave) = comparative_share(&users).unwrap();
        assert!((remain - 0.583).abs() < 0.001);
        assert!((leave - 0.417).abs() < 0.001);
    }

    #[test]
    fn comparative_share_no_polarized_users_errors() {
        let users = vec![user_stance(stances(0, 0))];
        assert!(matches!(comparative_share(&users), Err(Error::NoPolarizedUsers)));
    }

    proptest! {
        #[test]
        fn classify_is_total_and_duplicate_invariant(
            remain_hits in 0usize..3, leave_hits in 0usize..3, ambiguous_hits in 0usize..2,
            noise in prop::collection::btree_set("[a-z]{3,8}", 0..4)
        ) {
            let lexicon = HashtagLexicon::bundled();
            let mut hashtags: BTreeSet<String> = noise
                .into_iter()
                .filter(|t| {
                    !lexicon.remain.contains(t) && !lexicon.leave.contains(t) && !lexicon.ambiguous.contains(t)
                })
                .collect();
            hashtags.extend(lexicon.remain.iter().take(remain_hits).cloned());
            hashtags.extend(lexicon.leave.iter().take(leave_hits).cloned());
            hashtags.extend(lexicon.ambiguous.iter().take(ambiguous_hits).cloned());

            let got = classify_tweet_rules(&hashtags, &lexicon);
            let expected = match (remain_hits > 0, leave_hits > 0) {
                (true, false) => Some(StanceLabel::ProRemain),
                (false, true) => Some(StanceLabel::ProLeave),
                (true, true) => Some(StanceLabel::NonPolarized),
                (false, false) => None,
            };
            prop_assert_eq!(got, expected);
        }

        #[test]
        fn user_stance_invariant_under_uniform_scaling(prt in 0u64..20, prl in 0u64..20, scale in 1u64..5) {
            let base = user_stance(stances(prt, prl));
            let scaled = user_stance(stances(prt * scale, prl * scale));
            prop_assert_eq!(base.label, scaled.label);
            match (base.score, scaled.score) {
                (None, None) => {}
                (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-12),
                _ => prop_assert!(false, "score definedness changed under scaling"),
            }
        }
    }
}
