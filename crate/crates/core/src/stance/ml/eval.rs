//! Classifier evaluation: ROC AUC, stratified cross-validation, per-class
//! precision/recall/F1.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stance::ml::features::SparseVector;
use crate::stance::ml::svm::{argmax_label, train_raw};
use crate::stance::StanceLabel;

/// Probability that a random positive outranks a random negative; ties
/// count one half. Computed from tie-averaged ranks, which matches the
/// O(P*N) pairwise definition exactly.
pub fn auc_binary(scores: &[(f64, bool)]) -> Result<f64> {
    let positives = scores.iter().filter(|(_, p)| *p).count();
    let negatives = scores.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::invalid_parameter(
            "scores",
            "need at least one positive and one negative example",
        ));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].0.partial_cmp(&scores[b].0).expect("scores must not be NaN"));

    // Average rank within each tied block, 1-based.
    let mut positive_rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]].0 == scores[order[i]].0 {
            j += 1;
        }
        let mean_rank = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            if scores[idx].1 {
                positive_rank_sum += mean_rank;
            }
        }
        i = j;
    }

    let p = positives as f64;
    let n = negatives as f64;
    Ok((positive_rank_sum - p * (p + 1.0) / 2.0) / (p * n))
}

/// Per-class precision/recall/F1 with its support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: StanceLabel,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

/// Cross-validation report aggregated over out-of-fold predictions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub folds: usize,
    pub per_class: Vec<ClassMetrics>,
    pub weighted_f1: f64,
    pub macro_ovr_auc: f64,
    /// `confusion[true][pred]`, class order ProRemain, ProLeave, NonPolarized.
    pub confusion: [[u64; 3]; 3],
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Per-class metrics and support-weighted F1 from a confusion matrix.
/// F1 is computed as `2*TP / (2*TP + FP + FN)`.
pub fn metrics_from_confusion(confusion: &[[u64; 3]; 3]) -> (Vec<ClassMetrics>, f64) {
    let total: u64 = confusion.iter().flatten().sum();
    let mut per_class = Vec::with_capacity(3);
    let mut weighted_f1 = 0.0;
    for (c, label) in StanceLabel::ALL.iter().enumerate() {
        let tp = confusion[c][c];
        let fp: u64 = (0..3).filter(|&r| r != c).map(|r| confusion[r][c]).sum();
        let fn_: u64 = (0..3).filter(|&p| p != c).map(|p| confusion[c][p]).sum();
        let support: u64 = confusion[c].iter().sum();
        let precision = ratio(tp as f64, (tp + fp) as f64);
        let recall = ratio(tp as f64, (tp + fn_) as f64);
        let f1 = ratio(2.0 * tp as f64, (2 * tp + fp + fn_) as f64);
        weighted_f1 += (support as f64 / total as f64) * f1;
        per_class.push(ClassMetrics { label: *label, precision, recall, f1, support });
    }
    (per_class, weighted_f1)
}

/// Stratified k-fold cross-validation.
///
/// Folds are stratified per class with a seeded shuffle; every fold model is
/// trained with the same hyperparameters and seed, and the report aggregates
/// the out-of-fold predictions, so the result does not depend on fold
/// scheduling. AUC is the macro average of the one-vs-rest AUCs over the
/// classes present in the data.
pub fn kfold_cv(
    labeled: &[(SparseVector, StanceLabel)],
    dim: usize,
    k: usize,
    lambda: f64,
    epochs: usize,
    seed: u64,
) -> Result<CvReport> {
    if k < 2 {
        return Err(Error::invalid_parameter("k", format!("need k >= 2, got {k}")));
    }
    let mut by_class: [Vec<usize>; 3] = Default::default();
    for (i, (_, label)) in labeled.iter().enumerate() {
        by_class[label.index()].push(i);
    }
    for (c, members) in by_class.iter().enumerate() {
        if !members.is_empty() && members.len() < k {
            return Err(Error::ClassTooSmall {
                class: StanceLabel::ALL[c].to_string(),
                count: members.len(),
                folds: k,
            });
        }
    }

    // Deal each class's shuffled members round-robin into the k folds.
    let mut fold_of = vec![0usize; labeled.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX); // distinct from the per-class training streams
    for members in by_class.iter_mut() {
        members.shuffle(&mut rng);
        for (j, &i) in members.iter().enumerate() {
            fold_of[i] = j % k;
        }
    }

    let mut predictions: Vec<Option<(StanceLabel, [f64; 3])>> = vec![None; labeled.len()];
    for fold in 0..k {
        let train_set: Vec<(SparseVector, StanceLabel)> = labeled
            .iter()
            .zip(&fold_of)
            .filter(|(_, &f)| f != fold)
            .map(|((x, y), _)| (x.clone(), *y))
            .collect();
        let (weights, bias, _) = train_raw(&train_set, dim, lambda, epochs, seed)?;
        for (i, (x, _)) in labeled.iter().enumerate() {
            if fold_of[i] == fold {
                let mut values = [0.0; 3];
                for (c, value) in values.iter_mut().enumerate() {
                    *value = x.dot(&weights[c]) + bias[c];
                }
                predictions[i] = Some((argmax_label(&values), values));
            }
        }
    }

    let mut confusion = [[0u64; 3]; 3];
    for (i, (_, truth)) in labeled.iter().enumerate() {
        let (pred, _) = predictions[i].expect("every sample predicted exactly once");
        confusion[truth.index()][pred.index()] += 1;
    }
    let (per_class, weighted_f1) = metrics_from_confusion(&confusion);

    let mut auc_sum = 0.0;
    let mut auc_classes = 0;
    for c in 0..3 {
        if by_class[c].is_empty() {
            continue;
        }
        let scores: Vec<(f64, bool)> = labeled
            .iter()
            .enumerate()
            .map(|(i, (_, truth))| {
                let (_, values) = predictions[i].expect("predicted");
                (values[c], truth.index() == c)
            })
            .collect();
        auc_sum += auc_binary(&scores)?;
        auc_classes += 1;
    }

    Ok(CvReport {
        folds: k,
        per_class,
        weighted_f1,
        macro_ovr_auc: auc_sum / auc_classes as f64,
        confusion,
    })
}
