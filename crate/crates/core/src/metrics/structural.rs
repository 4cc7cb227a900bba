//! Cosine between TF-ISF vectors over `lemma/CLASS` terms.

use std::collections::{BTreeMap, BTreeSet};

use crate::text::Document;

/// Term weights for one document, with the sentence statistics behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIsfVector {
    pub weights: BTreeMap<String, f64>,
    pub term_counts: BTreeMap<String, usize>,
    pub sentence_freq: BTreeMap<String, usize>,
    pub sentence_count: usize,
}

/// Smoothed inverse sentence frequency, always >= 1 when `sf <= n`.
pub fn isf(sentence_count: usize, sentence_freq: usize) -> f64 {
    ((1.0 + sentence_count as f64) / (1.0 + sentence_freq as f64)).ln() + 1.0
}

impl TfIsfVector {
    pub fn from_document(doc: &Document) -> Self {
        let mut term_counts: BTreeMap<String, usize> = BTreeMap::new();
        let mut sentence_freq: BTreeMap<String, usize> = BTreeMap::new();
        for span in &doc.sentences {
            let mut seen = BTreeSet::new();
            for i in span.clone() {
                let term = doc.term(i);
                *term_counts.entry(term.clone()).or_default() += 1;
                seen.insert(term);
            }
            for term in seen {
                *sentence_freq.entry(term).or_default() += 1;
            }
        }
        let sentence_count = doc.sentences.len();
        let weights = term_counts
            .iter()
            .map(|(t, &tf)| (t.clone(), tf as f64 * isf(sentence_count, sentence_freq[t])))
            .collect();
        TfIsfVector {
            weights,
            term_counts,
            sentence_freq,
            sentence_count,
        }
    }

    pub fn norm(&self) -> f64 {
        self.weights.values().map(|w| w * w).sum::<f64>().sqrt()
    }

    /// Cosine over the union term space; 0 if either vector is all-zero.
    pub fn cosine(&self, other: &TfIsfVector) -> f64 {
        let denom = self.norm() * other.norm();
        if denom == 0.0 {
            return 0.0;
        }
        // Both maps iterate in key order, so the sum order is the same
        // whichever side is `self`.
        let dot: f64 = self
            .weights
            .iter()
            .filter_map(|(t, w)| other.weights.get(t).map(|v| w * v))
            .sum();
        (dot / denom).clamp(0.0, 1.0)
    }
}

pub fn pos_tf_isf_cosine(a: &Document, b: &Document) -> f64 {
    TfIsfVector::from_document(a).cosine(&TfIsfVector::from_document(b))
}
