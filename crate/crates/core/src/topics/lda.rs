//! Latent Dirichlet allocation via collapsed Gibbs sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::topics::preprocess::{Dictionary, Document};

/// Sampler configuration. `alpha` and `beta` are symmetric Dirichlet priors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdaParams {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl LdaParams {
    /// Default priors: `alpha = 50 / K`, `beta = 0.01`.
    pub fn with_default_priors(k: usize, iterations: usize, seed: u64) -> Self {
        LdaParams {
            k,
            alpha: 50.0 / k as f64,
            beta: 0.01,
            iterations,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::invalid_parameter("k", format!("need k >= 2, got {}", self.k)));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::invalid_parameter("alpha", format!("must be > 0, got {}", self.alpha)));
        }
        if !(self.beta > 0.0) {
            return Err(Error::invalid_parameter("beta", format!("must be > 0, got {}", self.beta)));
        }
        Ok(())
    }
}

/// A fitted topic model: count matrices, token assignments, and the
/// configuration that produced them. `phi` and `theta` are derived from the
/// counts on demand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub vocab_size: usize,
    /// `topic_word_counts[k][w]`: tokens of word `w` assigned to topic `k`.
    pub topic_word_counts: Vec<Vec<u64>>,
    /// `doc_topic_counts[d][k]`: tokens of document `d` assigned to topic `k`.
    pub doc_topic_counts: Vec<Vec<u64>>,
    /// Total tokens assigned to each topic.
    pub topic_totals: Vec<u64>,
    /// Per-document, per-position topic assignment.
    pub assignments: Vec<Vec<u32>>,
    pub seed: u64,
    pub iterations_run: usize,
}

impl LdaModel {
    /// Topic-word distribution row: `(n_kw + beta) / (n_k + V*beta)`.
    pub fn phi_row(&self, topic: usize) -> Vec<f64> {
        let denom = self.topic_totals[topic] as f64 + self.vocab_size as f64 * self.beta;
        self.topic_word_counts[topic]
            .iter()
            .map(|&n| (n as f64 + self.beta) / denom)
            .collect()
    }

    /// Document-topic distribution row: `(n_dk + alpha) / (n_d + K*alpha)`.
    pub fn theta_row(&self, doc: usize) -> Vec<f64> {
        let n_d: u64 = self.doc_topic_counts[doc].iter().sum();
        let denom = n_d as f64 + self.k as f64 * self.alpha;
        self.doc_topic_counts[doc]
            .iter()
            .map(|&n| (n as f64 + self.alpha) / denom)
            .collect()
    }

    /// Highest-theta topic of a document; ties break toward the lower id.
    pub fn dominant_topic(&self, doc: usize) -> usize {
        let counts = &self.doc_topic_counts[doc];
        let mut best = 0;
        for (k, &n) in counts.iter().enumerate().skip(1) {
            if n > counts[best] {
                best = k;
            }
        }
        best
    }

    pub fn num_docs(&self) -> usize {
        self.doc_topic_counts.len()
    }

    /// Check the count matrices against the assignments and each other.
    pub fn validate_counts(&self) -> Result<()> {
        let mut total = 0u64;
        for (d, z_d) in self.assignments.iter().enumerate() {
            let mut per_topic = vec![0u64; self.k];
            for &z in z_d {
                per_topic[z as usize] += 1;
            }
            if per_topic != self.doc_topic_counts[d] {
                return Err(Error::invalid_parameter(
                    "model",
                    format!("doc {d} topic counts disagree with assignments"),
                ));
            }
            total += z_d.len() as u64;
        }
        for k in 0..self.k {
            let row_sum: u64 = self.topic_word_counts[k].iter().sum();
            if row_sum != self.topic_totals[k] {
                return Err(Error::invalid_parameter(
                    "model",
                    format!("topic {k} word counts sum to {row_sum}, total says {}", self.topic_totals[k]),
                ));
            }
        }
        let grand: u64 = self.topic_totals.iter().sum();
        if grand != total {
            return Err(Error::invalid_parameter(
                "model",
                format!("topic totals sum to {grand}, corpus has {total} tokens"),
            ));
        }
        Ok(())
    }

    /// Complete-data log joint `log p(w, z | alpha, beta)` of the collapsed
    /// model. Useful as a convergence diagnostic.
    pub fn log_joint(&self) -> f64 {
        let v = self.vocab_size as f64;
        let k = self.k as f64;
        let mut total = 0.0;
        for topic in 0..self.k {
            total += ln_gamma(v * self.beta) - v * ln_gamma(self.beta);
            for &n in &self.topic_word_counts[topic] {
                total += ln_gamma(n as f64 + self.beta);
            }
            total -= ln_gamma(self.topic_totals[topic] as f64 + v * self.beta);
        }
        for counts in &self.doc_topic_counts {
            let n_d: u64 = counts.iter().sum();
            total += ln_gamma(k * self.alpha) - k * ln_gamma(self.alpha);
            for &n in counts {
                total += ln_gamma(n as f64 + self.alpha);
            }
            total -= ln_gamma(n_d as f64 + k * self.alpha);
        }
        total
    }
}

/// Incremental collapsed Gibbs sampler. [`train_lda`] wraps it; keep the
/// sampler itself when per-sweep hooks are needed.
pub struct LdaSampler {
    docs: Vec<Vec<usize>>,
    model: LdaModel,
    rng: ChaCha8Rng,
    weights: Vec<f64>,
}

impl LdaSampler {
    pub fn new(docs: &[Document], vocab_size: usize, params: &LdaParams) -> Result<Self> {
        params.validate()?;
        if docs.is_empty() {
            return Err(Error::EmptyDocuments);
        }
        for doc in docs {
            if let Some(&bad) = doc.terms.iter().find(|&&t| t >= vocab_size) {
                return Err(Error::invalid_parameter(
                    "docs",
                    format!("term index {bad} out of range for vocabulary of {vocab_size}"),
                ));
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let mut model = LdaModel {
            k: params.k,
            alpha: params.alpha,
            beta: params.beta,
            vocab_size,
            topic_word_counts: vec![vec![0; vocab_size]; params.k],
            doc_topic_counts: vec![vec![0; params.k]; docs.len()],
            topic_totals: vec![0; params.k],
            assignments: Vec::with_capacity(docs.len()),
            seed: params.seed,
            iterations_run: 0,
        };
        for (d, doc) in docs.iter().enumerate() {
            let mut z_d = Vec::with_capacity(doc.terms.len());
            for &w in &doc.terms {
                let topic = rng.gen_range(0..params.k);
                z_d.push(topic as u32);
                model.doc_topic_counts[d][topic] += 1;
                model.topic_word_counts[topic][w] += 1;
                model.topic_totals[topic] += 1;
            }
            model.assignments.push(z_d);
        }
        Ok(LdaSampler {
            docs: docs.iter().map(|d| d.terms.clone()).collect(),
            model,
            rng,
            weights: vec![0.0; params.k],
        })
    }

    pub fn model(&self) -> &LdaModel {
        &self.model
    }

    pub fn into_model(self) -> LdaModel {
        self.model
    }

    /// One full sweep: resample every token's topic from the collapsed
    /// conditional with its own count excluded.
    pub fn sweep(&mut self) {
        let k = self.model.k;
        let v_beta = self.model.vocab_size as f64 * self.model.beta;
        for d in 0..self.docs.len() {
            for i in 0..self.docs[d].len() {
                let w = self.docs[d][i];
                let old = self.model.assignments[d][i] as usize;
                self.model.doc_topic_counts[d][old] -= 1;
                self.model.topic_word_counts[old][w] -= 1;
                self.model.topic_totals[old] -= 1;

                let mut cumulative = 0.0;
                for topic in 0..k {
                    let doc_part = self.model.doc_topic_counts[d][topic] as f64 + self.model.alpha;
                    let word_part = (self.model.topic_word_counts[topic][w] as f64 + self.model.beta)
                        / (self.model.topic_totals[topic] as f64 + v_beta);
                    cumulative += doc_part * word_part;
                    self.weights[topic] = cumulative;
                }
                let draw = self.rng.gen::<f64>() * cumulative;
                let new = self.weights.iter().position(|&c| draw < c).unwrap_or(k - 1);

                self.model.assignments[d][i] = new as u32;
                self.model.doc_topic_counts[d][new] += 1;
                self.model.topic_word_counts[new][w] += 1;
                self.model.topic_totals[new] += 1;
            }
        }
        self.model.iterations_run += 1;
    }
}

/// Run `params.iterations` Gibbs sweeps over the documents.
pub fn train_lda(docs: &[Document], vocab_size: usize, params: &LdaParams) -> Result<LdaModel> {
    let mut sampler = LdaSampler::new(docs, vocab_size, params)?;
    for _ in 0..params.iterations {
        sampler.sweep();
    }
    Ok(sampler.into_model())
}

/// Ranked top words of one topic with their probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSummary {
    pub topic: usize,
    /// `(term, probability)` by descending probability; ties break
    /// lexicographically by term.
    pub top_words: Vec<(String, f64)>,
    pub label: Option<String>,
}

/// The `n` highest-probability terms of a topic. Asking for more terms than
/// the vocabulary holds ranks the whole vocabulary.
pub fn top_words(model: &LdaModel, dictionary: &Dictionary, topic: usize, n: usize) -> Result<TopicSummary> {
    if topic >= model.k {
        return Err(Error::invalid_parameter(
            "topic",
            format!("topic {topic} out of range for K={}", model.k),
        ));
    }
    let phi = model.phi_row(topic);
    let mut ranked: Vec<(String, f64)> = phi
        .iter()
        .enumerate()
        .map(|(w, &p)| (dictionary.term(w).to_string(), p))
        .collect();
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("phi is finite").then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(n);
    Ok(TopicSummary { topic, top_words: ranked, label: None })
}
