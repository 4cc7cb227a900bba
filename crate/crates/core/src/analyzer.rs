//! Bundles the linguistic resources needed to turn raw text into a
//! [`Document`] and to score document pairs.

use std::path::PathBuf;
use std::sync::{Arc, LazyLock};

use crate::embedding::{EmbedError, EmbeddingProvider};
use crate::error::DataError;
use crate::metrics::{self, MetricVector, SentimentConfig, SentimentLexicon};
use crate::pos::TagLexicon;
use crate::text::{split_sentences, tokenize, Abbreviations, Document, Lemmatizer};

static SHARED: LazyLock<Arc<Analyzer>> = LazyLock::new(|| Arc::new(Analyzer::builtin()));

#[derive(Debug, Clone)]
pub struct Analyzer {
    pub abbreviations: Abbreviations,
    pub lemmatizer: Lemmatizer,
    pub tagger: TagLexicon,
    pub sentiment: SentimentLexicon,
    pub sentiment_config: SentimentConfig,
}

/// Optional overrides for the shipped resource files.
#[derive(Debug, Clone, Default)]
pub struct ResourcePaths {
    pub abbreviations: Option<PathBuf>,
    pub irregular: Option<PathBuf>,
    pub pos_lexicon: Option<PathBuf>,
    pub sentiment_lexicon: Option<PathBuf>,
}

impl Analyzer {
    pub fn builtin() -> Self {
        Analyzer {
            abbreviations: Abbreviations::builtin(),
            lemmatizer: Lemmatizer::builtin(),
            tagger: TagLexicon::builtin(),
            sentiment: SentimentLexicon::builtin(),
            sentiment_config: SentimentConfig::default(),
        }
    }

    /// Process-wide instance over the shipped resources.
    pub fn shared() -> Arc<Analyzer> {
        SHARED.clone()
    }

    pub fn from_paths(paths: &ResourcePaths) -> Result<Self, DataError> {
        let mut a = Analyzer::builtin();
        if let Some(p) = &paths.abbreviations {
            a.abbreviations = Abbreviations::load(p)?;
        }
        if let Some(p) = &paths.irregular {
            a.lemmatizer = Lemmatizer::load(p)?;
        }
        if let Some(p) = &paths.pos_lexicon {
            a.tagger = TagLexicon::load(p)?;
        }
        if let Some(p) = &paths.sentiment_lexicon {
            a.sentiment = SentimentLexicon::load(p)?;
        }
        Ok(a)
    }

    pub fn with_sentiment_config(mut self, config: SentimentConfig) -> Self {
        self.sentiment_config = config;
        self
    }

    pub fn document(&self, raw: &str) -> Document {
        let mut tokens = Vec::new();
        let mut sentences = Vec::new();
        for sentence in split_sentences(raw, &self.abbreviations) {
            let start = tokens.len();
            tokens.extend(tokenize(sentence));
            if tokens.len() > start {
                sentences.push(start..tokens.len());
            }
        }
        // Tag context never crosses a sentence boundary.
        let tags: Vec<_> = sentences
            .iter()
            .flat_map(|span| self.tagger.tag(&tokens[span.clone()]))
            .collect();
        let lemmas = tokens
            .iter()
            .zip(&tags)
            .map(|(t, &c)| self.lemmatizer.lemmatize(t, c))
            .collect();
        Document {
            raw: raw.to_string(),
            tokens,
            sentences,
            lemmas,
            tags,
        }
    }

    pub fn sentence_polarity(&self, sentence: &str) -> f64 {
        metrics::sentence_polarity(sentence, &self.sentiment)
    }

    pub fn aspect_sentiment_match(&self, a: &Document, b: &Document) -> f64 {
        metrics::aspect_sentiment_match(a, b, &self.sentiment, &self.sentiment_config)
    }

    pub fn metric_vector(
        &self,
        response: &Document,
        reference: &Document,
        provider: &dyn EmbeddingProvider,
    ) -> Result<MetricVector, EmbedError> {
        metrics::metric_vector(
            response,
            reference,
            provider,
            &self.sentiment,
            &self.sentiment_config,
        )
    }

    /// Convenience wrapper that builds both documents first.
    pub fn score_texts(
        &self,
        response: &str,
        reference: &str,
        provider: &dyn EmbeddingProvider,
    ) -> Result<MetricVector, EmbedError> {
        self.metric_vector(&self.document(response), &self.document(reference), provider)
    }
}

impl Default for Analyzer {
    fn default() -> Self {
        Analyzer::builtin()
    }
}
