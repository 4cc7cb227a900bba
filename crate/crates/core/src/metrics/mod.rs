//! The four adoption scores for a (response, reference) pair.

mod lexical;
mod semantic;
pub mod sentiment;
mod structural;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::embedding::{EmbedError, EmbeddingProvider};
use crate::text::Document;

pub use lexical::{jaccard, jaccard_tokens};
pub use semantic::{cosine, embedding_cosine};
pub use sentiment::{
    aspect_polarities, aspect_sentiment_match, polarity_of_tokens, sentence_polarity,
    SentimentConfig, SentimentLabel, SentimentLexicon,
};
pub use structural::{isf, pos_tf_isf_cosine, TfIsfVector};

/// One score per adoption axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricVector {
    pub jaccard: f64,
    pub pos_tf_isf_cosine: f64,
    pub embedding_cosine: f64,
    pub sentiment_match: f64,
}

impl MetricVector {
    pub const ZERO: MetricVector = MetricVector {
        jaccard: 0.0,
        pos_tf_isf_cosine: 0.0,
        embedding_cosine: 0.0,
        sentiment_match: 0.0,
    };

    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Jaccard => self.jaccard,
            Metric::PosTfIsfCosine => self.pos_tf_isf_cosine,
            Metric::EmbeddingCosine => self.embedding_cosine,
            Metric::SentimentMatch => self.sentiment_match,
        }
    }

    /// Checks the declared ranges with 1e-9 slack.
    pub fn in_bounds(&self) -> bool {
        const EPS: f64 = 1e-9;
        let unit = |x: f64| (-EPS..=1.0 + EPS).contains(&x);
        unit(self.jaccard)
            && unit(self.pos_tf_isf_cosine)
            && unit(self.sentiment_match)
            && (-1.0 - EPS..=1.0 + EPS).contains(&self.embedding_cosine)
    }
}

/// Names the four axes, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Jaccard,
    PosTfIsfCosine,
    EmbeddingCosine,
    SentimentMatch,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::Jaccard,
        Metric::PosTfIsfCosine,
        Metric::EmbeddingCosine,
        Metric::SentimentMatch,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Metric::Jaccard => "jaccard",
            Metric::PosTfIsfCosine => "pos_tf_isf_cosine",
            Metric::EmbeddingCosine => "embedding_cosine",
            Metric::SentimentMatch => "sentiment_match",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Metric::Jaccard => "Jaccard",
            Metric::PosTfIsfCosine => "POS TF-ISF cosine",
            Metric::EmbeddingCosine => "Embedding cosine",
            Metric::SentimentMatch => "Aspect sentiment match",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Metric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.key() == s)
            .ok_or_else(|| format!("unknown metric {s:?}"))
    }
}

/// The three provider-free scores.
pub fn local_scores(
    response: &Document,
    reference: &Document,
    lexicon: &SentimentLexicon,
    config: &SentimentConfig,
) -> (f64, f64, f64) {
    (
        jaccard(response, reference),
        pos_tf_isf_cosine(response, reference),
        aspect_sentiment_match(response, reference, lexicon, config),
    )
}

pub fn metric_vector(
    response: &Document,
    reference: &Document,
    provider: &dyn EmbeddingProvider,
    lexicon: &SentimentLexicon,
    config: &SentimentConfig,
) -> Result<MetricVector, EmbedError> {
    let embedding_cosine = embedding_cosine(response, reference, provider)?;
    let (jaccard, pos_tf_isf_cosine, sentiment_match) =
        local_scores(response, reference, lexicon, config);
    Ok(MetricVector {
        jaccard,
        pos_tf_isf_cosine,
        embedding_cosine,
        sentiment_match,
    })
}
