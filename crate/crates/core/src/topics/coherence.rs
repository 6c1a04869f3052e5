//! Intrinsic topic coherence from document co-occurrence counts.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::topics::lda::LdaModel;
use crate::topics::preprocess::Document;

/// UMass-style coherence of one topic.
///
/// Over the top-`n` words ranked by probability, sums
/// `log((D(w_i, w_j) + 1) / D(w_j))` for every rank pair `i < j`, where
/// `D(w)` counts documents containing `w` and `D(w_i, w_j)` documents
/// containing both. More negative means less coherent.
pub fn umass_coherence(model: &LdaModel, docs: &[Document], topic: usize, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid_parameter("n", format!("need n >= 2, got {n}")));
    }
    if topic >= model.k {
        return Err(Error::invalid_parameter(
            "topic",
            format!("topic {topic} out of range for K={}", model.k),
        ));
    }
    let phi = model.phi_row(topic);
    let mut ranked: Vec<usize> = (0..model.vocab_size).collect();
    ranked.sort_by(|&a, &b| phi[b].partial_cmp(&phi[a]).expect("phi is finite").then(a.cmp(&b)));
    ranked.truncate(n);
    Ok(coherence_of_terms(&ranked, docs))
}

/// The same score over an explicit ranked term-id list.
pub fn coherence_of_terms(ranked_terms: &[usize], docs: &[Document]) -> f64 {
    let wanted: HashSet<usize> = ranked_terms.iter().copied().collect();
    let mut doc_freq: HashMap<usize, f64> = HashMap::new();
    let mut pair_freq: HashMap<(usize, usize), f64> = HashMap::new();
    for doc in docs {
        let present: Vec<usize> = {
            let mut p: Vec<usize> = doc
                .terms
                .iter()
                .copied()
                .filter(|t| wanted.contains(t))
                .collect();
            p.sort_unstable();
            p.dedup();
            p
        };
        for &t in &present {
            *doc_freq.entry(t).or_insert(0.0) += 1.0;
        }
        for (a, &ta) in present.iter().enumerate() {
            for &tb in &present[a + 1..] {
                *pair_freq.entry((ta, tb)).or_insert(0.0) += 1.0;
            }
        }
    }

    let mut score = 0.0;
    for i in 0..ranked_terms.len() {
        for j in (i + 1)..ranked_terms.len() {
            let (wi, wj) = (ranked_terms[i], ranked_terms[j]);
            let key = (wi.min(wj), wi.max(wj));
            let co = pair_freq.get(&key).copied().unwrap_or(0.0);
            let dj = doc_freq.get(&wj).copied().unwrap_or(0.0);
            debug_assert!(dj > 0.0, "ranked term {wj} absent from the document set");
            score += ((co + 1.0) / dj).ln();
        }
    }
    score
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, terms: &[usize]) -> Document {
        Document { tweet_id: id.into(), terms: terms.to_vec() }
    }

    #[test]
    fn cooccurring_pair_scores_positive() {
        // Terms 0 and 1 appear together in every document containing either.
        let docs = vec![doc("a", &[0, 1]), doc("b", &[0, 1]), doc("c", &[2])];
        // D(0,1)=2, D(1)=2 -> ln(3/2) > 0.
        let score = coherence_of_terms(&[0, 1], &docs);
        assert!((score - (3.0f64 / 2.0).ln()).abs() < 1e-12);
        assert!(score > 0.0);
    }

    #[test]
    fn never_cooccurring_pair_scores_negative() {
        let docs = vec![doc("a", &[0]), doc("b", &[1]), doc("c", &[1])];
        // D(0,1)=0, D(1)=2 -> ln(1/2) < 0.
        let score = coherence_of_terms(&[0, 1], &docs);
        assert!((score - (0.5f64).ln()).abs() < 1e-12);
        assert!(score < 0.0);
    }

    #[test]
    fn five_document_fixture_hand_computed() {
        // D(0)=3, D(1)=4, D(2)=1; D(0,1)=2, D(0,2)=1, D(1,2)=0.
        let docs = vec![
            doc("1", &[0, 1]),
            doc("2", &[0, 1]),
            doc("3", &[1]),
            doc("4", &[1]),
            doc("5", &[0, 2]),
        ];
        // Ranked [0, 1, 2]:
        //   (0,1): ln((2+1)/D(1)) = ln(3/4)
        //   (0,2): ln((1+1)/D(2)) = ln(2/1)
        //   (1,2): ln((0+1)/D(2)) = ln(1/1)
        let expected = (3.0f64 / 4.0).ln() + 2.0f64.ln();
        let score = coherence_of_terms(&[0, 1, 2], &docs);
        assert!((score - expected).abs() < 1e-9);
    }

    #[test]
    fn denominator_uses_later_ranked_word() {
        // D(0)=1, D(1)=3, no co-occurrence.
        let docs = vec![doc("1", &[0]), doc("2", &[1]), doc("3", &[1]), doc("4", &[1])];
        // Pair (0,1) in rank order [0, 1]: ln(1/D(1)) = ln(1/3).
        let score = coherence_of_terms(&[0, 1], &docs);
        assert!((score - (1.0f64 / 3.0).ln()).abs() < 1e-12);
        // Reversed ranking divides by D(0) instead.
        let reversed = coherence_of_terms(&[1, 0], &docs);
        assert!((reversed - 1.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn umass_requires_two_words_and_valid_topic() {
        let docs = vec![doc("a", &[0, 1])];
        let model = crate::topics::lda::train_lda(
            &docs,
            2,
            &crate::topics::lda::LdaParams { k: 2, alpha: 0.1, beta: 0.1, iterations: 2, seed: 0 },
        )
        .unwrap();
        assert!(umass_coherence(&model, &docs, 0, 1).is_err());
        assert!(umass_coherence(&model, &docs, 5, 2).is_err());
        assert!(umass_coherence(&model, &docs, 0, 2).is_ok());
    }
}
