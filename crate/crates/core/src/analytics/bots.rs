//! Joining externally supplied bot scores with user stances.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::analytics::UserAggregate;
use crate::error::{Error, Result};
use crate::stance::rules::comparative_share;

/// An account is a bot when its score is strictly above this.
pub const BOT_SCORE_THRESHOLD: f64 = 0.8;

/// Bot scores per user id, each in `[0, 1]`.
#[derive(Debug, Clone, Default)]
pub struct BotScores {
    pub scores: BTreeMap<String, f64>,
}

impl BotScores {
    /// Load a CSV `user_id,score`. Lines starting with `#` are skipped.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path.as_ref())?;
        let mut scores = BTreeMap::new();
        for row in reader.deserialize::<(String, f64)>() {
            let (user_id, score) = row?;
            if !(0.0..=1.0).contains(&score) {
                return Err(Error::invalid_parameter(
                    "bot_score",
                    format!("score {score} for user {user_id:?} outside [0, 1]"),
                ));
            }
            scores.insert(user_id, score);
        }
        Ok(BotScores { scores })
    }

    pub fn get(&self, user_id: &str) -> Option<f64> {
        self.scores.get(user_id).copied()
    }

    /// Strictly-above-threshold rule; `None` when the user has no score.
    pub fn is_bot(&self, user_id: &str, threshold: f64) -> Option<bool> {
        self.get(user_id).map(|s| s > threshold)
    }
}

/// One bot-score bin `[low, high)`; the final bin is closed at 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BotBin {
    pub low: f64,
    pub high: f64,
    pub users: u64,
    /// `(remain, leave)` comparative shares over the bin's polarized users;
    /// absent when the bin has none.
    pub shares: Option<(f64, f64)>,
}

/// Stance-by-bot-score report plus the bot/non-bot summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BotStanceReport {
    pub bins: Vec<BotBin>,
    pub joined_users: u64,
    /// Users with a stance but no bot score, excluded from the join.
    pub missing_scores: u64,
    pub bot_fraction: f64,
    pub mean_posts_bot: Option<f64>,
    pub mean_posts_non_bot: Option<f64>,
}

/// Bin users by bot score and compute per-bin comparative stance shares.
///
/// `bin_width` must divide 1 evenly. Users without a score are excluded and
/// counted. The summary marks users as bots when their score is strictly
/// above `bot_threshold`.
pub fn bot_stance_bins(
    users: &[UserAggregate],
    scores: &BotScores,
    bin_width: f64,
    bot_threshold: f64,
) -> Result<BotStanceReport> {
    let n_bins = (1.0 / bin_width).round();
    if !(bin_width > 0.0) || n_bins < 1.0 || (n_bins * bin_width - 1.0).abs() > 1e-9 {
        return Err(Error::invalid_parameter(
            "bin_width",
            format!("{bin_width} does not divide 1 evenly"),
        ));
    }
    let n_bins = n_bins as usize;

    let mut binned: Vec<Vec<&UserAggregate>> = vec![Vec::new(); n_bins];
    let mut missing_scores = 0u64;
    let mut bots = 0u64;
    let mut bot_posts = 0u64;
    let mut non_bot_posts = 0u64;
    let mut joined = 0u64;
    for user in users {
        let Some(score) = scores.get(&user.user_id) else {
            missing_scores += 1;
            continue;
        };
        joined += 1;
        let bin = ((score / bin_width).floor() as usize).min(n_bins - 1);
        binned[bin].push(user);
        if score > bot_threshold {
            bots += 1;
            bot_posts += user.total_posts;
        } else {
            non_bot_posts += user.total_posts;
        }
    }
    if joined == 0 {
        return Err(Error::NoJoinedUsers);
    }

    let bins = binned
        .iter()
        .enumerate()
        .map(|(i, members)| {
            let stances: Vec<_> = members.iter().map(|u| u.stance).collect();
            BotBin {
                low: i as f64 / n_bins as f64,
                high: (i + 1) as f64 / n_bins as f64,
                users: members.len() as u64,
                shares: comparative_share(&stances).ok(),
            }
        })
        .collect();

    let non_bots = joined - bots;
    Ok(BotStanceReport {
        bins,
        joined_users: joined,
        missing_scores,
        bot_fraction: bots as f64 / joined as f64,
        mean_posts_bot: (bots > 0).then(|| bot_posts as f64 / bots as f64),
        mean_posts_non_bot: (non_bots > 0).then(|| non_bot_posts as f64 / non_bots as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stance::rules::UserStance;
    use crate::stance::StanceLabel;

    fn user(id: &str, label: StanceLabel, posts: u64) -> UserAggregate {
        let (prt, prl) = match label {
            StanceLabel::ProRemain => (1, 0),
            StanceLabel::ProLeave => (0, 1),
            StanceLabel::NonPolarized => (0, 0),
        };
        UserAggregate {
            user_id: id.into(),
            stance: UserStance {
                prt,
                prl,
                score: (prt + prl > 0).then(|| prt as f64 / (prt + prl) as f64),
                label,
            },
            total_posts: posts,
        }
    }

    fn scores_of(pairs: &[(&str, f64)]) -> BotScores {
        BotScores {
            scores: pairs.iter().map(|(u, s)| (u.to_string(), *s)).collect(),
        }
    }

    #[test]
    fn all_high_scoring_leavers_fill_top_bin() {
        let users: Vec<_> = (0..5).map(|i| user(&format!("u{i}"), StanceLabel::ProLeave, 2)).collect();
        let scores = scores_of(&users.iter().map(|u| (u.user_id.as_str(), 0.85)).collect::<Vec<_>>());
        let report = bot_stance_bins(&users, &scores, 0.1, BOT_SCORE_THRESHOLD).unwrap();
        // 0.85 lands in [0.8, 0.9).
        let occupied = &report.bins[8];
        assert_eq!(occupied.users, 5);
        assert_eq!(occupied.shares, Some((0.0, 1.0)));
        assert_eq!(report.bot_fraction, 1.0);
        assert_eq!(report.mean_posts_non_bot, None);
        assert!(report.bins.iter().enumerate().all(|(i, b)| i == 8 || b.users == 0));
    }

    #[test]
    fn score_exactly_at_threshold_is_not_a_bot() {
        let users = vec![user("edge", StanceLabel::ProLeave, 1)];
        let scores = scores_of(&[("edge", 0.8)]);
        assert_eq!(scores.is_bot("edge", BOT_SCORE_THRESHOLD), Some(false));
        let report = bot_stance_bins(&users, &scores, 0.1, BOT_SCORE_THRESHOLD).unwrap();
        assert_eq!(report.bot_fraction, 0.0);
        // 0.8 opens the [0.8, 0.9) bin.
        assert_eq!(report.bins[8].users, 1);
    }

    #[test]
    fn monotone_leave_share_fixture() {
        // Bin [0, 0.5): 3 remain + 1 leave; bin [0.5, 1]: 1 remain + 3 leave.
        let users = vec![
            user("r1", StanceLabel::ProRemain, 1),
            user("r2", StanceLabel::ProRemain, 1),
            user("r3", StanceLabel::ProRemain, 1),
            user("l1", StanceLabel::ProLeave, 1),
            user("r4", StanceLabel::ProRemain, 1),
            user("l2", StanceLabel::ProLeave, 1),
            user("l3", StanceLabel::ProLeave, 1),
            user("l4", StanceLabel::ProLeave, 1),
        ];
        let scores = scores_of(&[
            ("r1", 0.1), ("r2", 0.2), ("r3", 0.3), ("l1", 0.4),
            ("r4", 0.6), ("l2", 0.7), ("l3", 0.8), ("l4", 0.9),
        ]);
        let report = bot_stance_bins(&users, &scores, 0.5, BOT_SCORE_THRESHOLD).unwrap();
        assert_eq!(report.bins.len(), 2);
        assert_eq!(report.bins[0].shares, Some((0.75, 0.25)));
        assert_eq!(report.bins[1].shares, Some((0.25, 0.75)));
        let binned_total: u64 = report.bins.iter().map(|b| b.users).sum();
        assert_eq!(binned_total, report.joined_users);
    }

    #[test]
    fn missing_scores_are_excluded_and_counted() {
        let users = vec![user("scored", StanceLabel::ProRemain, 4), user("unscored", StanceLabel::ProLeave, 9)];
        let scores = scores_of(&[("scored", 0.2)]);
        let report = bot_stance_bins(&users, &scores, 0.25, BOT_SCORE_THRESHOLD).unwrap();
        assert_eq!(report.joined_users, 1);
        assert_eq!(report.missing_scores, 1);
        assert_eq!(report.mean_posts_non_bot, Some(4.0));
    }

    #[test]
    fn uneven_bin_width_rejected() {
        let users = vec![user("a", StanceLabel::ProRemain, 1)];
        let scores = scores_of(&[("a", 0.5)]);
        assert!(bot_stance_bins(&users, &scores, 0.3, BOT_SCORE_THRESHOLD).is_err());
    }

    #[test]
    fn empty_join_errors() {
        let users = vec![user("a", StanceLabel::ProRemain, 1)];
        let scores = scores_of(&[]);
        assert!(matches!(
            bot_stance_bins(&users, &scores, 0.5, BOT_SCORE_THRESHOLD),
            Err(Error::NoJoinedUsers)
        ));
    }

    #[test]
    fn score_one_lands_in_final_bin() {
        let users = vec![user("max", StanceLabel::ProLeave, 1)];
        let scores = scores_of(&[("max", 1.0)]);
        let report = bot_stance_bins(&users, &scores, 0.2, BOT_SCORE_THRESHOLD).unwrap();
        assert_eq!(report.bins.last().unwrap().users, 1);
    }
}
