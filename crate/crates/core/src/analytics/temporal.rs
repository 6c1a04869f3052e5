//! Stance over time: monthly participation series and pre/post-event
//! transition analysis.

use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use serde::Serialize;

use crate::corpus::TweetRecord;
use crate::error::{Error, Result};
use crate::stance::rules::{comparative_share, user_stance_with_thresholds};
use crate::stance::{StanceLabel, TweetStance};
use crate::time::Month;

/// One month of the stance participation series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonthlyStancePoint {
    /// `(remain, leave)` comparative shares; absent when the month has no
    /// polarized users.
    pub shares: Option<(f64, f64)>,
    pub polarized_users: u64,
}

pub type StanceTimeSeries = BTreeMap<Month, MonthlyStancePoint>;

/// Recompute every active user's stance from that month's tweets alone,
/// then take comparative shares over the month's polarized users.
pub fn monthly_stance_series(tweets: &[TweetRecord], stances: &[TweetStance]) -> StanceTimeSeries {
    monthly_stance_series_with_thresholds(
        tweets,
        stances,
        crate::stance::rules::USER_SCORE_LEAVE_BELOW,
        crate::stance::rules::USER_SCORE_REMAIN_ABOVE,
    )
}

/// [`monthly_stance_series`] with explicit user-score thresholds.
pub fn monthly_stance_series_with_thresholds(
    tweets: &[TweetRecord],
    stances: &[TweetStance],
    leave_below: f64,
    remain_above: f64,
) -> StanceTimeSeries {
    assert_eq!(tweets.len(), stances.len(), "stances must align with tweets");
    let mut per_month_user: BTreeMap<Month, BTreeMap<&str, Vec<TweetStance>>> = BTreeMap::new();
    for (tweet, stance) in tweets.iter().zip(stances) {
        per_month_user
            .entry(Month::of(tweet.created_at))
            .or_default()
            .entry(&tweet.user_id)
            .or_default()
            .push(*stance);
    }
    per_month_user
        .into_iter()
        .map(|(month, users)| {
            let user_stances: Vec<_> = users
                .into_values()
                .map(|s| user_stance_with_thresholds(s, leave_below, remain_above))
                .collect();
            let polarized = user_stances
                .iter()
                .filter(|u| u.label != StanceLabel::NonPolarized)
                .count() as u64;
            let shares = comparative_share(&user_stances).ok();
            (month, MonthlyStancePoint { shares, polarized_users: polarized })
        })
        .collect()
}

/// Stance movement across an event date.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionReport {
    /// `matrix[pre][post]` user counts, class order ProRemain, ProLeave,
    /// NonPolarized. Only users active in both windows are counted.
    pub matrix: [[u64; 3]; 3],
    pub users_in_both: u64,
    /// Fraction of pre-ProRemain users whose post-event label differs.
    pub remain_change_rate: Option<f64>,
    /// Fraction of pre-ProLeave users whose post-event label differs.
    pub leave_change_rate: Option<f64>,
}

/// Compare each user's stance over their pre-event tweets (strictly before
/// `event_date`) with their stance over post-event tweets (on or after).
/// Users active in only one window are excluded.
pub fn pre_post_transitions(
    tweets: &[TweetRecord],
    stances: &[TweetStance],
    event_date: DateTime<Utc>,
) -> Result<TransitionReport> {
    pre_post_transitions_with_thresholds(
        tweets,
        stances,
        event_date,
        crate::stance::rules::USER_SCORE_LEAVE_BELOW,
        crate::stance::rules::USER_SCORE_REMAIN_ABOVE,
    )
}

/// [`pre_post_transitions`] with explicit user-score thresholds.
pub fn pre_post_transitions_with_thresholds(
    tweets: &[TweetRecord],
    stances: &[TweetStance],
    event_date: DateTime<Utc>,
    leave_below: f64,
    remain_above: f64,
) -> Result<TransitionReport> {
    assert_eq!(tweets.len(), stances.len(), "stances must align with tweets");
    let mut pre: BTreeMap<&str, Vec<TweetStance>> = BTreeMap::new();
    let mut post: BTreeMap<&str, Vec<TweetStance>> = BTreeMap::new();
    for (tweet, stance) in tweets.iter().zip(stances) {
        let side = if tweet.created_at < event_date { &mut pre } else { &mut post };
        side.entry(&tweet.user_id).or_default().push(*stance);
    }

    let mut matrix = [[0u64; 3]; 3];
    let mut users_in_both = 0u64;
    for (user, pre_stances) in &pre {
        let Some(post_stances) = post.get(user) else {
            continue;
        };
        users_in_both += 1;
        let pre_label = user_stance_with_thresholds(pre_stances.iter().copied(), leave_below, remain_above).label;
        let post_label = user_stance_with_thresholds(post_stances.iter().copied(), leave_below, remain_above).label;
        matrix[pre_label.index()][post_label.index()] += 1;
    }
    if users_in_both == 0 {
        return Err(Error::NoOverlappingUsers);
    }

    let change_rate = |label: StanceLabel| {
        let row = matrix[label.index()];
        let total: u64 = row.iter().sum();
        (total > 0).then(|| (total - row[label.index()]) as f64 / total as f64)
    };
    Ok(TransitionReport {
        matrix,
        users_in_both,
        remain_change_rate: change_rate(StanceLabel::ProRemain),
        leave_change_rate: change_rate(StanceLabel::ProLeave),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stance::StanceSource;
    use crate::time::parse_timestamp;
    use std::collections::BTreeSet;

    fn tweet_at(id: &str, user: &str, ts: &str) -> TweetRecord {
        TweetRecord {
            id: id.into(),
            user_id: user.into(),
            created_at: parse_timestamp(ts).unwrap(),
            text: String::new(),
            lang: "en".into(),
            retweet_count: 0,
            like_count: 0,
            hashtags: BTreeSet::new(),
            mentions: BTreeSet::new(),
            user_followers: None,
        }
    }

    fn stance(label: StanceLabel) -> TweetStance {
        TweetStance { label, source: StanceSource::Rule }
    }

    #[test]
    fn monthly_shares_over_polarized_users_only() {
        let mut tweets = Vec::new();
        let mut stances = Vec::new();
        for i in 0..6 {
            tweets.push(tweet_at(&format!("r{i}"), &format!("remainer{i}"), "2016-05-10"));
            stances.push(stance(StanceLabel::ProRemain));
        }
        for i in 0..4 {
            tweets.push(tweet_at(&format!("l{i}"), &format!("leaver{i}"), "2016-05-11"));
            stances.push(stance(StanceLabel::ProLeave));
        }
        let series = monthly_stance_series(&tweets, &stances);
        let point = &series[&Month::new(2016, 5)];
        assert_eq!(point.polarized_users, 10);
        let (remain, leave) = point.shares.unwrap();
        assert!((remain - 0.6).abs() < 1e-12);
        assert!((leave - 0.4).abs() < 1e-12);
    }

    #[test]
    fn balanced_user_in_month_is_excluded_from_shares() {
        let tweets = vec![
            tweet_at("1", "torn", "2016-05-10"),
            tweet_at("2", "torn", "2016-05-12"),
            tweet_at("3", "sure", "2016-05-13"),
        ];
        let stances = vec![
            stance(StanceLabel::ProRemain),
            stance(StanceLabel::ProLeave),
            stance(StanceLabel::ProRemain),
        ];
        let series = monthly_stance_series(&tweets, &stances);
        let point = &series[&Month::new(2016, 5)];
        // "torn" scores 0.5 -> NonPolarized; only "sure" counts.
        assert_eq!(point.polarized_users, 1);
        assert_eq!(point.shares, Some((1.0, 0.0)));
    }

    #[test]
    fn month_without_polarized_users_has_no_shares() {
        let tweets = vec![tweet_at("1", "meh", "2016-07-01")];
        let stances = vec![stance(StanceLabel::NonPolarized)];
        let series = monthly_stance_series(&tweets, &stances);
        let point = &series[&Month::new(2016, 7)];
        assert_eq!(point.polarized_users, 0);
        assert_eq!(point.shares, None);
    }

    #[test]
    fn two_month_fixture_hand_computed() {
        // May: alice 2xRemain (remain), bob 1xLeave (leave) -> (0.5, 0.5, 2)
        // June: alice 1xLeave (leave), carol 3xRemain (remain), bob 1R+1L (excluded)
        //       -> (0.5, 0.5, 2)
        let rows: Vec<(&str, &str, StanceLabel)> = vec![
            ("alice", "2016-05-01", StanceLabel::ProRemain),
            ("alice", "2016-05-02", StanceLabel::ProRemain),
            ("bob", "2016-05-03", StanceLabel::ProLeave),
            ("alice", "2016-06-01", StanceLabel::ProLeave),
            ("carol", "2016-06-02", StanceLabel::ProRemain),
            ("carol", "2016-06-03", StanceLabel::ProRemain),
            ("carol", "2016-06-04", StanceLabel::ProRemain),
            ("bob", "2016-06-05", StanceLabel::ProRemain),
            ("bob", "2016-06-06", StanceLabel::ProLeave),
        ];
        let tweets: Vec<_> = rows
            .iter()
            .enumerate()
            .map(|(i, (user, ts, _))| tweet_at(&i.to_string(), user, ts))
            .collect();
        let stances: Vec<_> = rows.iter().map(|(_, _, label)| stance(*label)).collect();
        let series = monthly_stance_series(&tweets, &stances);
        assert_eq!(series[&Month::new(2016, 5)].shares, Some((0.5, 0.5)));
        assert_eq!(series[&Month::new(2016, 5)].polarized_users, 2);
        assert_eq!(series[&Month::new(2016, 6)].shares, Some((0.5, 0.5)));
        assert_eq!(series[&Month::new(2016, 6)].polarized_users, 2);
    }

    fn transition_fixture(event: &str) -> (Vec<TweetRecord>, Vec<TweetStance>, DateTime<Utc>) {
        let mut tweets = Vec::new();
        let mut stances = Vec::new();
        let mut push = |user: &str, ts: &str, label: StanceLabel| {
            tweets.push(tweet_at(&format!("{user}-{ts}-{}", tweets.len()), user, ts));
            stances.push(stance(label));
        };
        // switcher: Leave before, Remain after.
        push("switcher", "2016-06-01", StanceLabel::ProLeave);
        push("switcher", "2016-07-01", StanceLabel::ProRemain);
        // steady: Remain on both sides.
        push("steady", "2016-06-01", StanceLabel::ProRemain);
        push("steady", "2016-07-01", StanceLabel::ProRemain);
        // late: only active after the event, excluded.
        push("late", "2016-07-02", StanceLabel::ProLeave);
        (tweets, stances, parse_timestamp(event).unwrap())
    }

    #[test]
    fn transitions_count_pre_post_pairs() {
        let (tweets, stances, event) = transition_fixture("2016-06-23");
        let report = pre_post_transitions(&tweets, &stances, event).unwrap();
        assert_eq!(report.users_in_both, 2);
        assert_eq!(report.matrix[StanceLabel::ProLeave.index()][StanceLabel::ProRemain.index()], 1);
        assert_eq!(report.matrix[StanceLabel::ProRemain.index()][StanceLabel::ProRemain.index()], 1);
        assert_eq!(report.leave_change_rate, Some(1.0));
        assert_eq!(report.remain_change_rate, Some(0.0));
    }

    #[test]
    fn change_rates_match_construction() {
        // 100 pre-Leave users, 62 change; 100 pre-Remain users, 33 change.
        let mut tweets = Vec::new();
        let mut stances = Vec::new();
        let mut push = |user: String, ts: &str, label: StanceLabel| {
            tweets.push(tweet_at(&format!("{user}-{ts}"), &user, ts));
            stances.push(stance(label));
        };
        for i in 0..100 {
            push(format!("leaver{i}"), "2016-05-01", StanceLabel::ProLeave);
            let post = if i < 62 { StanceLabel::ProRemain } else { StanceLabel::ProLeave };
            push(format!("leaver{i}"), "2016-08-01", post);
        }
        for i in 0..100 {
            push(format!("remainer{i}"), "2016-05-01", StanceLabel::ProRemain);
            let post = if i < 33 { StanceLabel::ProLeave } else { StanceLabel::ProRemain };
            push(format!("remainer{i}"), "2016-08-01", post);
        }
        let report = pre_post_transitions(&tweets, &stances, parse_timestamp("2016-06-23").unwrap()).unwrap();
        assert_eq!(report.leave_change_rate, Some(0.62));
        assert_eq!(report.remain_change_rate, Some(0.33));
        let leave_row: u64 = report.matrix[StanceLabel::ProLeave.index()].iter().sum();
        assert_eq!(leave_row, 100);
    }

    #[test]
    fn no_overlapping_users_errors() {
        let tweets = vec![tweet_at("1", "early", "2016-05-01"), tweet_at("2", "late", "2016-08-01")];
        let stances = vec![stance(StanceLabel::ProRemain), stance(StanceLabel::ProLeave)];
        let err = pre_post_transitions(&tweets, &stances, parse_timestamp("2016-06-23").unwrap()).unwrap_err();
        assert!(matches!(err, Error::NoOverlappingUsers));
    }
}
