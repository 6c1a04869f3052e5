//! Learned stance classification for tweets without stance-indicative
//! hashtags: tokenizer, n-gram features, linear SVM, cross-validation.

pub mod eval;
pub mod features;
pub mod io;
pub mod svm;
pub mod tokenize;

pub use eval::{auc_binary, kfold_cv, metrics_from_confusion, ClassMetrics, CvReport};
pub use features::{build_vocabulary, vectorize, NGramVocabulary, SparseVector};
pub use io::{
    load_labeled_csv, load_model, load_model_from, save_model, save_model_with_meta, LabeledTweet,
    MODEL_VERSION,
};
pub use svm::{
    predict, predict_vector, train, LinearStanceModel, TrainingMeta, DEFAULT_EPOCHS, DEFAULT_LAMBDA,
    DEFAULT_MIN_DF, DEFAULT_SEED,
};
pub use tokenize::{tokenize, TokenSequence, MENTION_TOKEN, URL_TOKEN};

use crate::error::Result;
use crate::stance::StanceLabel;

/// Hyperparameters for [`fit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainParams {
    pub lambda: f64,
    pub epochs: usize,
    pub min_df: usize,
    pub seed: u64,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            lambda: DEFAULT_LAMBDA,
            epochs: DEFAULT_EPOCHS,
            min_df: DEFAULT_MIN_DF,
            seed: DEFAULT_SEED,
        }
    }
}

/// Build a vocabulary over the labeled documents, vectorize, and train.
pub fn fit(labeled: &[(TokenSequence, StanceLabel)], params: &TrainParams) -> Result<LinearStanceModel> {
    let seqs: Vec<TokenSequence> = labeled.iter().map(|(d, _)| d.clone()).collect();
    let vocab = build_vocabulary(&seqs, params.min_df)?;
    let data: Vec<(SparseVector, StanceLabel)> = labeled
        .iter()
        .map(|(d, l)| (vectorize(d, &vocab), *l))
        .collect();
    train(&data, vocab, params.lambda, params.epochs, params.seed)
}

/// Vectorize labeled documents against a shared vocabulary and run
/// stratified k-fold cross-validation.
pub fn cross_validate(
    labeled: &[(TokenSequence, StanceLabel)],
    params: &TrainParams,
    k: usize,
) -> Result<CvReport> {
    let seqs: Vec<TokenSequence> = labeled.iter().map(|(d, _)| d.clone()).collect();
    let vocab = build_vocabulary(&seqs, params.min_df)?;
    let data: Vec<(SparseVector, StanceLabel)> = labeled
        .iter()
        .map(|(d, l)| (vectorize(d, &vocab), *l))
        .collect();
    kfold_cv(&data, vocab.len(), k, params.lambda, params.epochs, params.seed)
}
