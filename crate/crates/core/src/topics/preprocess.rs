//! Corpus preprocessing for topic discovery: stopword and short-token
//! removal, lemmatization, bigram detection and merging, dictionary
//! construction.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::TweetRecord;
use crate::error::Result;
use crate::stance::ml::tokenize::{tokenize, MENTION_TOKEN, URL_TOKEN};

/// Tokens shorter than this are dropped before topic modeling.
pub const MIN_TOKEN_LEN: usize = 3;

pub const DEFAULT_BIGRAM_MIN_COUNT: u64 = 5;
pub const DEFAULT_BIGRAM_THRESHOLD: f64 = 10.0;

/// Bijective term <-> index map with document frequencies.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Dictionary {
    /// Terms sorted lexicographically; index = position.
    pub terms: Vec<String>,
    /// Document frequency per term, parallel to `terms`.
    pub doc_freq: Vec<u64>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl Dictionary {
    fn from_doc_freq(df: HashMap<String, u64>) -> Self {
        let mut terms: Vec<String> = df.keys().cloned().collect();
        terms.sort_unstable();
        let doc_freq = terms.iter().map(|t| df[t]).collect();
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Dictionary { terms, doc_freq, index }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, idx: usize) -> &str {
        &self.terms[idx]
    }

    /// Rebuild the lookup index after deserialization.
    pub fn rebuild_index(&mut self) {
        self.index = self.terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    }
}

/// A preprocessed tweet: dictionary indices in text order, bigrams merged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub tweet_id: String,
    pub terms: Vec<usize>,
}

/// Load a stopword file, one term per line. Blank lines and `#` comments
/// are skipped.
pub fn load_stopwords(path: impl AsRef<Path>) -> Result<BTreeSet<String>> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_stopwords(&text))
}

fn parse_stopwords(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect()
}

/// The bundled English stopword list.
pub fn bundled_stopwords() -> BTreeSet<String> {
    parse_stopwords(include_str!("../data/stopwords.txt"))
}

/// Load a lemma file, CSV `form,lemma`. Unlisted forms fall through
/// unchanged.
pub fn load_lemmas(path: impl AsRef<Path>) -> Result<HashMap<String, String>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path.as_ref())?;
    let mut map = HashMap::new();
    for row in reader.deserialize::<(String, String)>() {
        let (form, lemma) = row?;
        map.insert(form.to_lowercase(), lemma.to_lowercase());
    }
    Ok(map)
}

/// The bundled English lemma table.
pub fn bundled_lemmas() -> HashMap<String, String> {
    let mut reader = csv::ReaderBuilder::new()
        .from_reader(include_str!("../data/lemmas.csv").as_bytes());
    reader
        .deserialize::<(String, String)>()
        .map(|row| row.expect("bundled lemma table parses"))
        .collect()
}

fn clean_tokens(text: &str, stopwords: &BTreeSet<String>, lemmas: &HashMap<String, String>) -> Vec<String> {
    tokenize(text)
        .0
        .into_iter()
        .filter(|t| t != URL_TOKEN && t != MENTION_TOKEN)
        .filter(|t| t.chars().count() >= MIN_TOKEN_LEN)
        .filter(|t| !stopwords.contains(t))
        .map(|t| lemmas.get(&t).cloned().unwrap_or(t))
        .collect()
}

/// Adjacent pairs worth merging into a single `a_b` term.
///
/// A pair qualifies when it occurs at least `min_count` times and
/// `(count(a,b) - min_count) * N / (count(a) * count(b)) >= threshold`,
/// where counts are corpus-wide token counts and `N` is the total number
/// of tokens.
pub fn detect_bigrams(docs: &[Vec<String>], min_count: u64, threshold: f64) -> BTreeSet<(String, String)> {
    let mut unigram: HashMap<&str, u64> = HashMap::new();
    let mut pair: HashMap<(&str, &str), u64> = HashMap::new();
    let mut total: u64 = 0;
    for doc in docs {
        for token in doc {
            *unigram.entry(token).or_insert(0) += 1;
            total += 1;
        }
        for window in doc.windows(2) {
            *pair.entry((&window[0], &window[1])).or_insert(0) += 1;
        }
    }
    pair.into_iter()
        .filter(|&((a, b), count)| {
            count >= min_count && {
                let score = (count - min_count) as f64 * total as f64
                    / (unigram[a] as f64 * unigram[b] as f64);
                score >= threshold
            }
        })
        .map(|((a, b), _)| (a.to_string(), b.to_string()))
        .collect()
}

/// Single greedy left-to-right pass: each detected adjacent pair becomes one
/// `a_b` token, consuming both members.
fn merge_bigrams(tokens: Vec<String>, merged: &BTreeSet<(String, String)>) -> Vec<String> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        if i + 1 < tokens.len() {
            let pair = (tokens[i].clone(), tokens[i + 1].clone());
            if merged.contains(&pair) {
                out.push(format!("{}_{}", pair.0, pair.1));
                i += 2;
                continue;
            }
        }
        out.push(tokens[i].clone());
        i += 1;
    }
    out
}

/// Preprocessing knobs for [`preprocess`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BigramParams {
    pub min_count: u64,
    pub threshold: f64,
}

impl Default for BigramParams {
    fn default() -> Self {
        BigramParams {
            min_count: DEFAULT_BIGRAM_MIN_COUNT,
            threshold: DEFAULT_BIGRAM_THRESHOLD,
        }
    }
}

/// Turn filtered tweets into dictionary-indexed documents.
///
/// Per tweet: tokenize, drop URL/mention placeholders, tokens shorter than
/// three characters, and stopwords, then lemmatize (identity fallback).
/// Detected bigrams are merged corpus-wide, and documents emptied by
/// preprocessing are dropped.
pub fn preprocess(
    tweets: &[TweetRecord],
    stopwords: &BTreeSet<String>,
    lemmas: &HashMap<String, String>,
    bigrams: BigramParams,
) -> (Dictionary, Vec<Document>) {
    let cleaned: Vec<(String, Vec<String>)> = tweets
        .iter()
        .map(|t| (t.id.clone(), clean_tokens(&t.text, stopwords, lemmas)))
        .filter(|(_, tokens)| !tokens.is_empty())
        .collect();

    let token_docs: Vec<Vec<String>> = cleaned.iter().map(|(_, t)| t.clone()).collect();
    let merged_pairs = detect_bigrams(&token_docs, bigrams.min_count, bigrams.threshold);

    let merged_docs: Vec<(String, Vec<String>)> = cleaned
        .into_iter()
        .map(|(id, tokens)| (id, merge_bigrams(tokens, &merged_pairs)))
        .collect();

    let mut doc_freq: HashMap<String, u64> = HashMap::new();
    let mut seen: HashSet<&str> = HashSet::new();
    for (_, tokens) in &merged_docs {
        seen.clear();
        for token in tokens {
            if seen.insert(token) {
                *doc_freq.entry(token.clone()).or_insert(0) += 1;
            }
        }
    }
    let dictionary = Dictionary::from_doc_freq(doc_freq);

    let documents = merged_docs
        .into_iter()
        .map(|(tweet_id, tokens)| Document {
            tweet_id,
            terms: tokens
                .iter()
                .map(|t| dictionary.index_of(t).expect("term was just added"))
                .collect(),
        })
        .collect();

    (dictionary, documents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::parse_timestamp;

    fn tweet(id: &str, text: &str) -> TweetRecord {
        TweetRecord {
            id: id.into(),
            user_id: "u".into(),
            created_at: parse_timestamp("2016-01-01").unwrap(),
            text: text.into(),
            lang: "en".into(),
            retweet_count: 0,
            like_count: 0,
            hashtags: BTreeSet::new(),
            mentions: BTreeSet::new(),
            user_followers: None,
        }
    }

    fn no_bigrams() -> BigramParams {
        BigramParams { min_count: u64::MAX, threshold: f64::MAX }
    }

    #[test]
    fn drops_stopwords_short_tokens_and_lemmatizes() {
        let stopwords = BTreeSet::from(["the".to_string(), "is".to_string()]);
        let lemmas = HashMap::from([("failing".to_string(), "fail".to_string())]);
        let (dict, docs) = preprocess(&[tweet("1", "The EU is failing")], &stopwords, &lemmas, no_bigrams());
        // "eu" is two characters, dropped by the length rule.
        assert_eq!(docs.len(), 1);
        let terms: Vec<&str> = docs[0].terms.iter().map(|&i| dict.term(i)).collect();
        assert_eq!(terms, ["fail"]);
    }

    #[test]
    fn all_stopword_tweet_is_dropped() {
        let stopwords = bundled_stopwords();
        let (_, docs) = preprocess(&[tweet("1", "the and but"), tweet("2", "customs union")], &stopwords, &HashMap::new(), no_bigrams());
        assert_eq!(docs.len(), 1);
        assert_eq!(docs[0].tweet_id, "2");
    }

    #[test]
    fn empty_lemma_map_passes_tokens_through() {
        let (dict, docs) = preprocess(&[tweet("1", "borders matter")], &BTreeSet::new(), &HashMap::new(), no_bigrams());
        let terms: Vec<&str> = docs[0].terms.iter().map(|&i| dict.term(i)).collect();
        assert_eq!(terms, ["borders", "matter"]);
    }

    #[test]
    fn url_and_mention_placeholders_dropped() {
        let (dict, docs) = preprocess(
            &[tweet("1", "read https://example.com via @someone tonight")],
            &BTreeSet::new(),
            &HashMap::new(),
            no_bigrams(),
        );
        let terms: Vec<&str> = docs[0].terms.iter().map(|&i| dict.term(i)).collect();
        assert_eq!(terms, ["read", "via", "tonight"]);
    }

    #[test]
    fn always_cooccurring_pair_is_merged() {
        // "customs union" co-occurs 50 times with varied neighbours, inside a
        // corpus of 600 tokens: score = (50-5)*600 / (50*50) = 10.8 >= 10.
        let mut tweets: Vec<TweetRecord> = (0..50)
            .map(|i| tweet(&format!("c{i}"), &format!("pre{} customs union post{}", i % 25, i % 25)))
            .collect();
        for i in 0..200 {
            tweets.push(tweet(&format!("f{i}"), &format!("fill{} fluff{}", i % 50, i % 50)));
        }
        let (dict, docs) = preprocess(&tweets, &BTreeSet::new(), &HashMap::new(), BigramParams::default());
        assert!(dict.index_of("customs_union").is_some());
        assert!(dict.index_of("customs").is_none());
        let terms: Vec<&str> = docs[0].terms.iter().map(|&i| dict.term(i)).collect();
        assert!(terms.contains(&"customs_union"));
        // Rare neighbour pairs stay unmerged.
        assert!(dict.index_of("pre0_customs").is_none());
    }

    #[test]
    fn rare_pair_not_merged() {
        let docs = vec![vec!["customs".to_string(), "union".to_string()]];
        let merged = detect_bigrams(&docs, 5, 1.0);
        assert!(merged.is_empty());
    }

    #[test]
    fn bigram_score_hand_computed() {
        // 20 tokens total: "aa bb" x4 (8 tokens), "cc dd" x1 (2), "aa cc" x1 (2),
        // plus 8 single-token docs of "ee".
        let mut docs: Vec<Vec<String>> = Vec::new();
        for _ in 0..4 {
            docs.push(vec!["aa".into(), "bb".into()]);
        }
        docs.push(vec!["cc".into(), "dd".into()]);
        docs.push(vec!["aa".into(), "cc".into()]);
        for _ in 0..8 {
            docs.push(vec!["ee".into()]);
        }
        let total: usize = docs.iter().map(|d| d.len()).sum();
        assert_eq!(total, 20);
        // count(aa,bb)=4, count(aa)=5, count(bb)=4, min_count=2:
        // score = (4-2)*20 / (5*4) = 2.0
        let merged = detect_bigrams(&docs, 2, 2.0);
        assert!(merged.contains(&("aa".to_string(), "bb".to_string())));
        let not_merged = detect_bigrams(&docs, 2, 2.0 + 1e-9);
        assert!(!not_merged.contains(&("aa".to_string(), "bb".to_string())));
        // count(cc,dd)=1 < min_count — never merged regardless of threshold.
        assert!(!merged.contains(&("cc".to_string(), "dd".to_string())));
    }

    #[test]
    fn greedy_merge_is_left_to_right() {
        let merged = BTreeSet::from([("a".to_string(), "b".to_string()), ("b".to_string(), "c".to_string())]);
        let out = merge_bigrams(vec!["a".into(), "b".into(), "c".into()], &merged);
        assert_eq!(out, ["a_b", "c"]);
    }

    #[test]
    fn reprocessing_dictionary_terms_changes_nothing() {
        let tweets: Vec<TweetRecord> = (0..30)
            .map(|i| tweet(&i.to_string(), "single market access and customs union rules"))
            .collect();
        // Aggressive merge settings so the dictionary holds merged terms too.
        let params = BigramParams { min_count: 2, threshold: 1.0 };
        let (dict, _) = preprocess(&tweets, &bundled_stopwords(), &bundled_lemmas(), params);
        assert!(dict.terms.iter().any(|t| t.contains('_')), "expected merged terms");
        for term in &dict.terms {
            let retokenized = tokenize(term);
            assert_eq!(retokenized.tokens(), [term.clone()], "term {term:?} not stable");
        }
    }

    #[test]
    fn dictionary_doc_freq_counts_documents() {
        let tweets = vec![tweet("1", "vote vote vote"), tweet("2", "vote today")];
        let (dict, docs) = preprocess(&tweets, &BTreeSet::new(), &HashMap::new(), no_bigrams());
        let vote = dict.index_of("vote").unwrap();
        assert_eq!(dict.doc_freq[vote], 2);
        assert_eq!(docs[0].terms, vec![vote, vote, vote]);
    }
}
