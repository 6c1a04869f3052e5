//! Run configuration: defaults, overridden by a TOML config file,
//! overridden by CLI flags. The effective config is hashed into every
//! artifact header.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "STANCEKIT_CONFIG";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Raw corpus JSONL.
    pub input: Option<PathBuf>,
    /// Artifact directory.
    pub out: PathBuf,
    /// Optional ISO-639-1 language filter applied at ingest.
    pub lang: Option<String>,
    /// Optional ingest window, ISO-8601; `from` inclusive, `to` exclusive.
    pub from: Option<String>,
    pub to: Option<String>,
    /// Abort ingest on the first malformed line.
    pub strict: bool,
    /// Pre/post comparison date.
    pub event_date: String,
    /// Labeled training CSV `tweet_id,text,label`.
    pub labels: Option<PathBuf>,
    /// Stance hashtag lexicon JSON; bundled lexicon when absent.
    pub lexicon: Option<PathBuf>,
    /// Stopword file; bundled list when absent.
    pub stopwords: Option<PathBuf>,
    /// Lemma CSV `form,lemma`; bundled table when absent.
    pub lemmas: Option<PathBuf>,
    /// Sentiment polarity CSV and negation list; bundled when absent.
    pub sentiment_lexicon: Option<PathBuf>,
    pub negations: Option<PathBuf>,
    /// Bot scores CSV `user_id,score`.
    pub bot_scores: Option<PathBuf>,
    /// Mention category CSV `handle,category`.
    pub categories: Option<PathBuf>,
    /// External monthly series CSV `month,value` for `correlate`.
    pub trend_series: Option<PathBuf>,
    pub stance: StanceConfig,
    pub lda: LdaConfig,
    pub thresholds: ThresholdConfig,
    pub bigrams: BigramConfig,
    pub segmentation: SegmentationConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: None,
            out: PathBuf::from("out"),
            lang: None,
            from: None,
            to: None,
            strict: false,
            event_date: "2016-06-23".to_string(),
            labels: None,
            lexicon: None,
            stopwords: None,
            lemmas: None,
            sentiment_lexicon: None,
            negations: None,
            bot_scores: None,
            categories: None,
            trend_series: None,
            stance: StanceConfig::default(),
            lda: LdaConfig::default(),
            thresholds: ThresholdConfig::default(),
            bigrams: BigramConfig::default(),
            segmentation: SegmentationConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StanceConfig {
    pub lambda: f64,
    pub epochs: usize,
    pub min_df: usize,
    pub seed: u64,
    pub cv_folds: usize,
}

impl Default for StanceConfig {
    fn default() -> Self {
        StanceConfig {
            lambda: stancekit::stance::ml::DEFAULT_LAMBDA,
            epochs: stancekit::stance::ml::DEFAULT_EPOCHS,
            min_df: stancekit::stance::ml::DEFAULT_MIN_DF,
            seed: stancekit::stance::ml::DEFAULT_SEED,
            cv_folds: 10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LdaConfig {
    pub k: usize,
    /// Symmetric document-topic prior; `50 / k` when absent.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
    /// Words reported (and scored for coherence) per topic.
    pub top_n: usize,
}

impl Default for LdaConfig {
    fn default() -> Self {
        LdaConfig {
            k: 20,
            alpha: None,
            beta: 0.01,
            iterations: 500,
            seed: 42,
            top_n: 10,
        }
    }
}

impl LdaConfig {
    pub fn effective_alpha(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / self.k as f64)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThresholdConfig {
    /// User score strictly below this is pro-leave.
    pub stance_low: f64,
    /// User score strictly above this is pro-remain.
    pub stance_high: f64,
    /// Bot score strictly above this marks a bot.
    pub bot: f64,
    /// Bot-score bin width; must divide 1 evenly.
    pub bot_bin_width: f64,
    /// Influence filter floors for topic discovery (inclusive).
    pub min_retweets: u64,
    pub min_words: usize,
    /// Mentions strictly above this are tracked.
    pub mention: u64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        ThresholdConfig {
            stance_low: 0.4,
            stance_high: 0.6,
            bot: 0.8,
            bot_bin_width: 0.1,
            min_retweets: 10,
            min_words: 10,
            mention: 10_000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BigramConfig {
    pub min_count: u64,
    pub threshold: f64,
}

impl Default for BigramConfig {
    fn default() -> Self {
        BigramConfig {
            min_count: stancekit::topics::preprocess::DEFAULT_BIGRAM_MIN_COUNT,
            threshold: stancekit::topics::preprocess::DEFAULT_BIGRAM_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SegmentationConfig {
    /// Boundary count; `boundaries + 1` periods.
    pub boundaries: usize,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        SegmentationConfig { boundaries: stancekit::topics::DEFAULT_BOUNDARIES }
    }
}

/// CLI flag overrides (flags win over the config file).
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub lang: Option<String>,
    pub from: Option<String>,
    pub to: Option<String>,
    pub strict: bool,
    /// Sets both the stance and LDA seeds.
    pub seed: Option<u64>,
    pub topics_k: Option<usize>,
    pub event_date: Option<String>,
    pub labels: Option<PathBuf>,
    pub bot_scores: Option<PathBuf>,
    pub categories: Option<PathBuf>,
    pub trend_series: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults, then the config file (explicit path or `STANCEKIT_CONFIG`),
    /// then CLI flags.
    pub fn resolve(config_path: Option<&PathBuf>, overrides: &Overrides) -> Result<Self, CliError> {
        let path = config_path
            .cloned()
            .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        let mut config = match path {
            Some(path) => {
                let text = std::fs::read_to_string(&path).map_err(|e| CliError::Config {
                    key: "config".into(),
                    reason: format!("cannot read {}: {e}", path.display()),
                })?;
                toml::from_str(&text).map_err(|e| CliError::Config {
                    key: "config".into(),
                    reason: e.to_string(),
                })?
            }
            None => RunConfig::default(),
        };
        config.apply(overrides);
        config.validate()?;
        Ok(config)
    }

    fn apply(&mut self, o: &Overrides) {
        macro_rules! take {
            ($field:ident) => {
                if let Some(v) = &o.$field {
                    self.$field = Some(v.clone());
                }
            };
        }
        take!(input);
        take!(lang);
        take!(from);
        take!(to);
        take!(labels);
        take!(bot_scores);
        take!(categories);
        take!(trend_series);
        if let Some(out) = &o.out {
            self.out = out.clone();
        }
        if o.strict {
            self.strict = true;
        }
        if let Some(seed) = o.seed {
            self.stance.seed = seed;
            self.lda.seed = seed;
        }
        if let Some(k) = o.topics_k {
            self.lda.k = k;
        }
        if let Some(date) = &o.event_date {
            self.event_date = date.clone();
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |key: &str, reason: String| Err(CliError::Config { key: key.into(), reason });
        let t = &self.thresholds;
        if !(0.0..=1.0).contains(&t.stance_low) || !(0.0..=1.0).contains(&t.stance_high) || t.stance_low > t.stance_high {
            return bad(
                "thresholds.stance_low/stance_high",
                format!("need 0 <= low <= high <= 1, got {} / {}", t.stance_low, t.stance_high),
            );
        }
        if !(0.0..=1.0).contains(&t.bot) {
            return bad("thresholds.bot", format!("must be in [0, 1], got {}", t.bot));
        }
        let n_bins = (1.0 / t.bot_bin_width).round();
        if !(t.bot_bin_width > 0.0) || (n_bins * t.bot_bin_width - 1.0).abs() > 1e-9 {
            return bad("thresholds.bot_bin_width", format!("{} does not divide 1 evenly", t.bot_bin_width));
        }
        if self.stance.lambda <= 0.0 {
            return bad("stance.lambda", format!("must be > 0, got {}", self.stance.lambda));
        }
        if self.stance.epochs == 0 {
            return bad("stance.epochs", "must be >= 1".into());
        }
        if self.stance.cv_folds < 2 {
            return bad("stance.cv_folds", format!("must be >= 2, got {}", self.stance.cv_folds));
        }
        if self.lda.k < 2 {
            return bad("lda.k", format!("must be >= 2, got {}", self.lda.k));
        }
        if self.lda.iterations == 0 {
            return bad("lda.iterations", "must be >= 1".into());
        }
        if self.lda.effective_alpha() <= 0.0 || self.lda.beta <= 0.0 {
            return bad("lda.alpha/beta", "priors must be > 0".into());
        }
        if self.lda.top_n < 2 {
            return bad("lda.top_n", "must be >= 2".into());
        }
        if self.segmentation.boundaries == 0 {
            return bad("segmentation.boundaries", "must be >= 1".into());
        }
        if self.bigrams.min_count == 0 {
            return bad("bigrams.min_count", "must be >= 1".into());
        }
        stancekit::time::parse_timestamp(&self.event_date)
            .map_err(|e| CliError::Config { key: "event_date".into(), reason: e.to_string() })?;
        for (key, value) in [("from", &self.from), ("to", &self.to)] {
            if let Some(value) = value {
                stancekit::time::parse_timestamp(value)
                    .map_err(|e| CliError::Config { key: key.into(), reason: e.to_string() })?;
            }
        }
        Ok(())
    }

    /// Hex digest of the effective config, stamped on every artifact.
    /// The output directory is excluded: where artifacts land does not
    /// change what they contain.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.out = PathBuf::new();
        let canonical = serde_json::to_string(&canonical).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        hex::encode(&digest[..6])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let config = RunConfig::default();
        config.validate().unwrap();
        assert_eq!(config.thresholds.mention, 10_000);
        assert_eq!(config.lda.effective_alpha(), 2.5);
        assert_eq!(config.event_date, "2016-06-23");
    }

    #[test]
    fn flags_win_over_file_values() {
        let mut config = RunConfig::default();
        config.lda.k = 12;
        config.apply(&Overrides { topics_k: Some(5), seed: Some(7), ..Overrides::default() });
        assert_eq!(config.lda.k, 5);
        assert_eq!(config.lda.seed, 7);
        assert_eq!(config.stance.seed, 7);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = toml::from_str::<RunConfig>("frobnicate = 3").unwrap_err();
        assert!(err.to_string().contains("frobnicate"));
    }

    #[test]
    fn invalid_threshold_names_key() {
        let mut config = RunConfig::default();
        config.thresholds.bot = 1.5;
        match config.validate() {
            Err(CliError::Config { key, .. }) => assert_eq!(key, "thresholds.bot"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = RunConfig::default();
        let b = RunConfig::default();
        assert_eq!(a.hash(), b.hash());
        let mut c = RunConfig::default();
        c.lda.seed = 99;
        assert_ne!(a.hash(), c.hash());
    }
}
