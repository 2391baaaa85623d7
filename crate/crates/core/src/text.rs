//! Text-content-accuracy metrics: phrase F1, bag-of-characters cosine, and
//! normalized Levenshtein similarity.
//!
//! Characters are Unicode scalar values throughout; byte-level metrics are
//! meaningless for CJK copy.

use std::collections::{BTreeMap, BTreeSet};

use unicode_normalization::UnicodeNormalization;

/// Normalizes a phrase: trim, NFC, lowercase.
fn normalize_phrase(s: &str) -> String {
    s.trim().nfc().collect::<String>().to_lowercase()
}

/// A deduplicated set of normalized phrases.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PhraseSet {
    phrases: BTreeSet<String>,
}

impl PhraseSet {
    /// Builds a set from raw phrases; empty phrases (after trimming) are
    /// dropped.
    pub fn new<I, S>(raw: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let phrases = raw
            .into_iter()
            .map(|s| normalize_phrase(s.as_ref()))
            .filter(|s| !s.is_empty())
            .collect();
        PhraseSet { phrases }
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    pub fn contains(&self, phrase: &str) -> bool {
        self.phrases.contains(&normalize_phrase(phrase))
    }
}

/// A reference/candidate text pair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TextPair {
    pub reference: String,
    pub candidate: String,
}

impl TextPair {
    pub fn new(reference: impl Into<String>, candidate: impl Into<String>) -> Self {
        TextPair {
            reference: reference.into(),
            candidate: candidate.into(),
        }
    }
}

/// F1 over exact phrase matches after normalization. Both sets empty is
/// perfect agreement (1.0); one side empty scores 0.
pub fn phrase_f1(gt: &PhraseSet, pred: &PhraseSet) -> f64 {
    if gt.is_empty() && pred.is_empty() {
        return 1.0;
    }
    if gt.is_empty() || pred.is_empty() {
        return 0.0;
    }
    let hits = gt.phrases.intersection(&pred.phrases).count() as f64;
    if hits == 0.0 {
        return 0.0;
    }
    let precision = hits / pred.len() as f64;
    let recall = hits / gt.len() as f64;
    2.0 * precision * recall / (precision + recall)
}

fn char_counts(s: &str) -> BTreeMap<char, usize> {
    let mut counts = BTreeMap::new();
    for c in s.chars().filter(|c| !c.is_whitespace()) {
        *counts.entry(c).or_insert(0) += 1;
    }
    counts
}

/// Cosine similarity between character-frequency vectors, whitespace
/// removed. Order-invariant by construction.
pub fn bag_of_chars_cosine(pair: &TextPair) -> f64 {
    let a = char_counts(&pair.reference);
    let b = char_counts(&pair.candidate);
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let dot: f64 = a
        .iter()
        .filter_map(|(c, &n)| b.get(c).map(|&m| (n * m) as f64))
        .sum();
    let norm = |m: &BTreeMap<char, usize>| {
        m.values().map(|&n| (n * n) as f64).sum::<f64>().sqrt()
    };
    dot / (norm(&a) * norm(&b))
}

/// Character-level Levenshtein distance (two-row DP).
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// `1 - lev(a, b) / max(|a|, |b|)` over characters; both empty is 1.0.
pub fn normalized_levenshtein_sim(pair: &TextPair) -> f64 {
    let la = pair.reference.chars().count();
    let lb = pair.candidate.chars().count();
    if la == 0 && lb == 0 {
        return 1.0;
    }
    1.0 - levenshtein(&pair.reference, &pair.candidate) as f64 / la.max(lb) as f64
}
