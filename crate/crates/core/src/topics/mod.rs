//! Topic discovery: preprocessing, bigram phrases, collapsed-Gibbs LDA,
//! coherence scoring, and temporal period segmentation.

pub mod coherence;
pub mod lda;
pub mod preprocess;
pub mod temporal;

pub use coherence::umass_coherence;
pub use lda::{top_words, train_lda, LdaModel, LdaParams, LdaSampler, TopicSummary};
pub use preprocess::{
    bundled_lemmas, bundled_stopwords, detect_bigrams, load_lemmas, load_stopwords, preprocess,
    BigramParams, Dictionary, Document,
};
pub use temporal::{monthly_change, monthly_topic_shares, segment_periods, DEFAULT_BOUNDARIES};
