//! Two-fold stance classification: hashtag rules plus a learned linear model.

pub mod ml;
pub mod rules;

use serde::{Deserialize, Serialize};

/// Three-valued stance polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StanceLabel {
    ProRemain,
    ProLeave,
    NonPolarized,
}

impl StanceLabel {
    pub const ALL: [StanceLabel; 3] = [StanceLabel::ProRemain, StanceLabel::ProLeave, StanceLabel::NonPolarized];

    pub fn as_str(self) -> &'static str {
        match self {
            StanceLabel::ProRemain => "ProRemain",
            StanceLabel::ProLeave => "ProLeave",
            StanceLabel::NonPolarized => "NonPolarized",
        }
    }

    /// Dense index in class order ProRemain < ProLeave < NonPolarized.
    pub fn index(self) -> usize {
        match self {
            StanceLabel::ProRemain => 0,
            StanceLabel::ProLeave => 1,
            StanceLabel::NonPolarized => 2,
        }
    }
}

impl std::fmt::Display for StanceLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which half of the two-fold pipeline produced a label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StanceSource {
    Rule,
    Model,
}

/// A classified tweet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetStance {
    pub label: StanceLabel,
    pub source: StanceSource,
}
