//! N-gram vocabulary construction and sparse document vectors.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stance::ml::tokenize::TokenSequence;

/// Uni/bi/tri-grams are always extracted.
pub const NGRAM_MIN: usize = 1;
pub const NGRAM_MAX: usize = 3;

/// A fixed n-gram feature space. Indices are dense and assigned in
/// lexicographic order of the joined n-gram strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NGramVocabulary {
    /// n-gram strings (tokens joined with `_`), sorted; index = position.
    pub terms: Vec<String>,
    pub n_range: (usize, usize),
    pub min_df: usize,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl NGramVocabulary {
    fn from_terms(terms: Vec<String>, min_df: usize) -> Self {
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        NGramVocabulary {
            terms,
            n_range: (NGRAM_MIN, NGRAM_MAX),
            min_df,
            index,
        }
    }

    /// Rebuild the lookup index after deserialization.
    pub fn rebuild_index(&mut self) {
        self.index = self.terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, ngram: &str) -> Option<usize> {
        self.index.get(ngram).copied()
    }
}

fn each_ngram(tokens: &[String], mut f: impl FnMut(String)) {
    for n in NGRAM_MIN..=NGRAM_MAX {
        if tokens.len() < n {
            break;
        }
        for window in tokens.windows(n) {
            f(window.join("_"));
        }
    }
}

/// Collect every uni/bi/tri-gram whose document frequency is at least
/// `min_df`. Errors on an empty document list.
pub fn build_vocabulary(docs: &[TokenSequence], min_df: usize) -> Result<NGramVocabulary> {
    if docs.is_empty() {
        return Err(Error::EmptyDocuments);
    }
    let mut doc_freq: HashMap<String, usize> = HashMap::new();
    let mut in_doc: HashSet<String> = HashSet::new();
    for doc in docs {
        in_doc.clear();
        each_ngram(doc.tokens(), |gram| {
            in_doc.insert(gram);
        });
        for gram in in_doc.drain() {
            *doc_freq.entry(gram).or_insert(0) += 1;
        }
    }
    let mut terms: Vec<String> = doc_freq
        .into_iter()
        .filter(|(_, df)| *df >= min_df)
        .map(|(gram, _)| gram)
        .collect();
    terms.sort_unstable();
    Ok(NGramVocabulary::from_terms(terms, min_df))
}

/// A sparse vector over vocabulary indices, sorted by index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector(pub Vec<(usize, f64)>);

impl SparseVector {
    pub fn l2_norm(&self) -> f64 {
        self.0.iter().map(|(_, v)| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.0.iter().map(|&(i, v)| v * dense[i]).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Count in-vocabulary n-grams and L2-normalize. Out-of-vocabulary n-grams
/// are ignored; a document with no in-vocabulary n-grams maps to the zero
/// vector.
pub fn vectorize(doc: &TokenSequence, vocab: &NGramVocabulary) -> SparseVector {
    let mut counts: HashMap<usize, f64> = HashMap::new();
    each_ngram(doc.tokens(), |gram| {
        if let Some(idx) = vocab.index_of(&gram) {
            *counts.entry(idx).or_insert(0.0) += 1.0;
        }
    });
    let mut entries: Vec<(usize, f64)> = counts.into_iter().collect();
    entries.sort_unstable_by_key(|&(i, _)| i);
    let mut vector = SparseVector(entries);
    let norm = vector.l2_norm();
    if norm > 0.0 {
        for (_, v) in &mut vector.0 {
            *v /= norm;
        }
    }
    vector
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stance::ml::tokenize::tokenize;
    use proptest::prelude::*;

    fn seq(tokens: &[&str]) -> TokenSequence {
        TokenSequence(tokens.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn single_doc_ngrams() {
        let vocab = build_vocabulary(&[seq(&["a", "b", "c"])], 1).unwrap();
        assert_eq!(vocab.terms, ["a", "a_b", "a_b_c", "b", "b_c", "c"]);
        assert_eq!(vocab.len(), 6);
    }

    #[test]
    fn min_df_prunes_rare_ngrams() {
        let docs = [seq(&["a", "b"]), seq(&["a", "c"])];
        let vocab = build_vocabulary(&docs, 2).unwrap();
        assert_eq!(vocab.terms, ["a"]);
    }

    #[test]
    fn hand_enumerated_vocabulary() {
        // "eu is bad", "eu is good", "bad deal" with min_df=2:
        // df(eu)=2, df(is)=2, df(eu_is)=2, df(bad)=2; everything else df=1.
        let docs = [seq(&["eu", "is", "bad"]), seq(&["eu", "is", "good"]), seq(&["bad", "deal"])];
        let vocab = build_vocabulary(&docs, 2).unwrap();
        assert_eq!(vocab.terms, ["bad", "eu", "eu_is", "is"]);
    }

    #[test]
    fn document_frequency_counts_documents_not_occurrences() {
        // "a" occurs twice in one doc; df is still 1.
        let docs = [seq(&["a", "a"]), seq(&["b"])];
        let vocab = build_vocabulary(&docs, 2).unwrap();
        assert!(vocab.is_empty());
    }

    #[test]
    fn empty_docs_error() {
        assert!(matches!(build_vocabulary(&[], 1), Err(Error::EmptyDocuments)));
    }

    #[test]
    fn vectorize_normalizes_counts() {
        let vocab = build_vocabulary(&[seq(&["a"])], 1).unwrap();
        let v = vectorize(&seq(&["a", "a"]), &vocab);
        assert_eq!(v.0, vec![(0, 1.0)]);
    }

    #[test]
    fn vectorize_oov_only_is_zero_vector() {
        let vocab = build_vocabulary(&[seq(&["a"])], 1).unwrap();
        let v = vectorize(&seq(&["x", "y"]), &vocab);
        assert!(v.is_empty());
        assert_eq!(v.l2_norm(), 0.0);
    }

    #[test]
    fn vectorize_three_equal_counts() {
        let docs = [seq(&["a", "b"])];
        let vocab = build_vocabulary(&docs, 1).unwrap();
        assert_eq!(vocab.terms, ["a", "a_b", "b"]);
        let v = vectorize(&seq(&["a", "b"]), &vocab);
        let expected = 1.0 / 3f64.sqrt();
        for (_, value) in &v.0 {
            assert!((value - expected).abs() < 1e-12);
        }
        assert!((v.l2_norm() - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn vectors_have_unit_or_zero_norm(texts in prop::collection::vec("[a-c ]{0,30}", 1..8),
                                          probe in "[a-d ]{0,30}") {
            let docs: Vec<TokenSequence> = texts.iter().map(|t| tokenize(t)).collect();
            let vocab = build_vocabulary(&docs, 1).unwrap();
            let v = vectorize(&tokenize(&probe), &vocab);
            let norm = v.l2_norm();
            prop_assert!(norm == 0.0 || (norm - 1.0).abs() < 1e-9);
        }
    }
}
