//! Lexicon-based tweet polarity scoring.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stance::ml::tokenize::TokenSequence;

/// Tokens this far back can negate a lexicon hit.
pub const NEGATION_WINDOW: usize = 2;

/// Sign of a sentiment score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SentimentLabel {
    Positive,
    Negative,
    Neutral,
}

impl SentimentLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SentimentLabel::Positive => "Positive",
            SentimentLabel::Negative => "Negative",
            SentimentLabel::Neutral => "Neutral",
        }
    }
}

impl std::fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Term polarities in `[-1, 1]` plus negation terms. The two sets are
/// disjoint by construction.
#[derive(Debug, Clone, Default)]
pub struct SentimentLexicon {
    polarities: BTreeMap<String, f64>,
    negations: BTreeSet<String>,
}

impl SentimentLexicon {
    pub fn new(polarities: BTreeMap<String, f64>, negations: BTreeSet<String>) -> Result<Self> {
        for (term, p) in &polarities {
            if !(-1.0..=1.0).contains(p) {
                return Err(Error::InvalidLexicon(format!(
                    "polarity of {term:?} is {p}, outside [-1, 1]"
                )));
            }
        }
        if let Some(overlap) = polarities.keys().find(|t| negations.contains(*t)) {
            return Err(Error::InvalidLexicon(format!(
                "term {overlap:?} is both a polarity term and a negation"
            )));
        }
        Ok(SentimentLexicon { polarities, negations })
    }

    /// The bundled general-purpose English lexicon.
    pub fn bundled() -> Self {
        let polarities = parse_polarity_csv(include_str!("data/sentiment.csv")).expect("bundled lexicon parses");
        let negations = parse_negations(include_str!("data/negations.txt"));
        SentimentLexicon::new(polarities, negations).expect("bundled lexicon is valid")
    }

    /// Load from a polarity CSV `term,polarity` and a negation file with one
    /// term per line.
    pub fn from_paths(polarity_csv: impl AsRef<Path>, negations: impl AsRef<Path>) -> Result<Self> {
        let polarities = parse_polarity_csv(&std::fs::read_to_string(polarity_csv)?)?;
        let negations = parse_negations(&std::fs::read_to_string(negations)?);
        SentimentLexicon::new(polarities, negations)
    }

    pub fn polarity(&self, term: &str) -> Option<f64> {
        self.polarities.get(term).copied()
    }

    pub fn is_negation(&self, term: &str) -> bool {
        self.negations.contains(term)
    }

    /// A copy with every polarity negated (used by property tests).
    pub fn negated(&self) -> Self {
        SentimentLexicon {
            polarities: self.polarities.iter().map(|(t, p)| (t.clone(), -p)).collect(),
            negations: self.negations.clone(),
        }
    }
}

fn parse_polarity_csv(text: &str) -> Result<BTreeMap<String, f64>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let mut map = BTreeMap::new();
    for row in reader.deserialize::<(String, f64)>() {
        let (term, polarity) = row?;
        map.insert(term.to_lowercase(), polarity);
    }
    Ok(map)
}

fn parse_negations(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect()
}

/// Sum of token polarities, with a hit's sign flipped when a negation term
/// occurs within the two preceding tokens. The label is the sign of the
/// score.
pub fn score_sentiment(doc: &TokenSequence, lexicon: &SentimentLexicon) -> (f64, SentimentLabel) {
    let tokens = doc.tokens();
    let mut score = 0.0;
    for (i, token) in tokens.iter().enumerate() {
        let Some(polarity) = lexicon.polarity(token) else {
            continue;
        };
        let negated = tokens[i.saturating_sub(NEGATION_WINDOW)..i]
            .iter()
            .any(|t| lexicon.is_negation(t));
        score += if negated { -polarity } else { polarity };
    }
    let label = if score > 0.0 {
        SentimentLabel::Positive
    } else if score < 0.0 {
        SentimentLabel::Negative
    } else {
        SentimentLabel::Neutral
    };
    (score, label)
}
