//! Linear stance model: one-vs-rest hinge-loss classifiers trained by
//! stochastic subgradient descent with step size `1/(lambda * t)`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stance::ml::features::{vectorize, NGramVocabulary, SparseVector};
use crate::stance::ml::tokenize::TokenSequence;
use crate::stance::StanceLabel;

pub const DEFAULT_LAMBDA: f64 = 1e-4;
pub const DEFAULT_EPOCHS: usize = 20;
pub const DEFAULT_MIN_DF: usize = 2;
pub const DEFAULT_SEED: u64 = 42;

/// Training hyperparameters, recorded in the model for reproducibility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub seed: u64,
    pub epochs: usize,
    pub lambda: f64,
    /// Total regularized hinge objective (summed over the one-vs-rest
    /// problems) evaluated on the training set at the end of each epoch.
    pub epoch_loss: Vec<f64>,
}

/// A trained 3-class linear stance classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearStanceModel {
    pub vocabulary: NGramVocabulary,
    /// Per-class weight vectors, class order ProRemain, ProLeave, NonPolarized.
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
    pub training_meta: TrainingMeta,
}

impl LinearStanceModel {
    /// Decision value per class for an already-vectorized document.
    pub fn decision_values(&self, vector: &SparseVector) -> [f64; 3] {
        let mut values = [0.0; 3];
        for (c, value) in values.iter_mut().enumerate() {
            *value = vector.dot(&self.weights[c]) + self.bias[c];
        }
        values
    }
}

fn check_params(lambda: f64, epochs: usize) -> Result<()> {
    if !(lambda > 0.0) {
        return Err(Error::invalid_parameter("lambda", format!("must be > 0, got {lambda}")));
    }
    if epochs == 0 {
        return Err(Error::invalid_parameter("epochs", "must be >= 1"));
    }
    Ok(())
}

/// One binary Pegasos problem: weights kept as `scale * values` so the
/// per-step decay is O(1) and updates are O(nnz).
struct ScaledWeights {
    scale: f64,
    values: Vec<f64>,
    bias: f64,
}

impl ScaledWeights {
    fn new(dim: usize) -> Self {
        ScaledWeights { scale: 1.0, values: vec![0.0; dim], bias: 0.0 }
    }

    fn decision(&self, x: &SparseVector) -> f64 {
        self.scale * x.dot(&self.values) + self.bias
    }

    fn materialize(self) -> (Vec<f64>, f64) {
        let mut values = self.values;
        for v in &mut values {
            *v *= self.scale;
        }
        (values, self.bias)
    }
}

/// Train the three one-vs-rest classifiers over pre-vectorized data.
/// Returns `(weights, bias, epoch_loss)`.
pub(crate) fn train_raw(
    data: &[(SparseVector, StanceLabel)],
    dim: usize,
    lambda: f64,
    epochs: usize,
    seed: u64,
) -> Result<(Vec<Vec<f64>>, Vec<f64>, Vec<f64>)> {
    check_params(lambda, epochs)?;
    let mut present = [false; 3];
    for (_, label) in data {
        present[label.index()] = true;
    }
    if present.iter().filter(|p| **p).count() < 2 {
        return Err(Error::DegenerateTrainingSet);
    }

    let n = data.len();
    let mut problems: Vec<ScaledWeights> = (0..3).map(|_| ScaledWeights::new(dim)).collect();
    let mut epoch_loss = vec![0.0; epochs];

    for (class_idx, problem) in problems.iter_mut().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(class_idx as u64);
        let mut order: Vec<usize> = (0..n).collect();
        let mut t: u64 = 0;

        for loss_slot in epoch_loss.iter_mut() {
            order.shuffle(&mut rng);
            for &i in &order {
                let (x, label) = &data[i];
                let y = if label.index() == class_idx { 1.0 } else { -1.0 };
                t += 1;
                let eta = 1.0 / (lambda * t as f64);
                let margin = y * problem.decision(x);
                let decay = 1.0 - eta * lambda; // = 1 - 1/t
                if decay == 0.0 {
                    problem.scale = 1.0;
                    problem.values.fill(0.0);
                } else {
                    problem.scale *= decay;
                }
                if margin < 1.0 {
                    let step = eta * y / problem.scale;
                    for &(idx, v) in &x.0 {
                        problem.values[idx] += step * v;
                    }
                    problem.bias += eta * y;
                }
            }
            *loss_slot += objective(problem, data, class_idx, lambda);
        }
    }

    let mut weights = Vec::with_capacity(3);
    let mut bias = Vec::with_capacity(3);
    for problem in problems {
        let (w, b) = problem.materialize();
        weights.push(w);
        bias.push(b);
    }
    Ok((weights, bias, epoch_loss))
}

/// Regularized hinge objective for one one-vs-rest problem:
/// `lambda/2 * ||w||^2 + mean hinge loss` (bias unregularized).
fn objective(problem: &ScaledWeights, data: &[(SparseVector, StanceLabel)], class_idx: usize, lambda: f64) -> f64 {
    let norm_sq: f64 = problem.values.iter().map(|v| v * v).sum::<f64>() * problem.scale * problem.scale;
    let hinge: f64 = data
        .iter()
        .map(|(x, label)| {
            let y = if label.index() == class_idx { 1.0 } else { -1.0 };
            (1.0 - y * problem.decision(x)).max(0.0)
        })
        .sum();
    0.5 * lambda * norm_sq + hinge / data.len() as f64
}

/// Train a model over pre-vectorized documents against a fixed vocabulary.
pub fn train(
    labeled: &[(SparseVector, StanceLabel)],
    vocabulary: NGramVocabulary,
    lambda: f64,
    epochs: usize,
    seed: u64,
) -> Result<LinearStanceModel> {
    let (weights, bias, epoch_loss) = train_raw(labeled, vocabulary.len(), lambda, epochs, seed)?;
    Ok(LinearStanceModel {
        vocabulary,
        weights,
        bias,
        training_meta: TrainingMeta { seed, epochs, lambda, epoch_loss },
    })
}

/// Predict a tokenized document: winning class plus the per-class decision
/// values. Ties break toward the earlier class in the fixed class order.
pub fn predict(model: &LinearStanceModel, doc: &TokenSequence) -> (StanceLabel, [f64; 3]) {
    let vector = vectorize(doc, &model.vocabulary);
    predict_vector(model, &vector)
}

/// [`predict`] over an already-vectorized document.
pub fn predict_vector(model: &LinearStanceModel, vector: &SparseVector) -> (StanceLabel, [f64; 3]) {
    let values = model.decision_values(vector);
    (argmax_label(&values), values)
}

pub(crate) fn argmax_label(values: &[f64; 3]) -> StanceLabel {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    StanceLabel::ALL[best]
}
