//! Lexicon polarity scoring and aspect-level sentiment agreement.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::DataError;
use crate::pos::PosClass;
use crate::text::{tokenize, Document};

const DEFAULT_LEXICON: &str = include_str!("../../data/sentiment.csv");

/// Tokens within this distance before a sentiment word can negate it.
pub const NEGATION_WINDOW: usize = 3;
/// Multiplier applied to a negated polarity.
pub const NEGATION_FACTOR: f64 = -0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SentimentLabel {
    Positive,
    Negative,
    Neutral,
}

impl SentimentLabel {
    /// POSITIVE above `+threshold`, NEGATIVE below `-threshold`.
    pub fn from_polarity(p: f64, threshold: f64) -> Self {
        if p > threshold {
            SentimentLabel::Positive
        } else if p < -threshold {
            SentimentLabel::Negative
        } else {
            SentimentLabel::Neutral
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentimentConfig {
    /// Half-width of the NEUTRAL band.
    pub neutral_threshold: f64,
    /// Count agreeing NEUTRAL labels as matches (sensitivity analysis only).
    pub count_neutral_matches: bool,
}

impl Default for SentimentConfig {
    fn default() -> Self {
        SentimentConfig {
            neutral_threshold: 0.1,
            count_neutral_matches: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LexiconEntry {
    pub polarity: f64,
    pub factor: f64,
    pub negator: bool,
}

impl LexiconEntry {
    fn is_booster(&self) -> bool {
        !self.negator && self.factor != 1.0
    }

    fn is_sentiment(&self) -> bool {
        !self.negator && self.factor == 1.0
    }
}

#[derive(Debug, Clone, Default)]
pub struct SentimentLexicon {
    entries: HashMap<String, LexiconEntry>,
}

#[derive(Deserialize)]
struct Row {
    word: String,
    polarity: f64,
    factor: f64,
    negator: String,
}

impl SentimentLexicon {
    /// Parses the `word,polarity,factor,negator` CSV (header required).
    pub fn parse(text: &str) -> Result<Self, DataError> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| DataError::malformed("sentiment lexicon", 1, e.to_string()))?
            .clone();
        let expected = ["word", "polarity", "factor", "negator"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(DataError::malformed(
                "sentiment lexicon",
                1,
                format!("expected header {}", expected.join(",")),
            ));
        }
        let mut entries = HashMap::new();
        for record in reader.records() {
            let record =
                record.map_err(|e| DataError::malformed("sentiment lexicon", line_of(&e), e.to_string()))?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let row: Row = record
                .deserialize(Some(&headers))
                .map_err(|e| DataError::malformed("sentiment lexicon", line, e.to_string()))?;
            if !(-1.0..=1.0).contains(&row.polarity) {
                return Err(DataError::malformed(
                    "sentiment lexicon",
                    line,
                    format!("polarity {} outside [-1, 1]", row.polarity),
                ));
            }
            if !(row.factor.is_finite() && row.factor > 0.0) {
                return Err(DataError::malformed(
                    "sentiment lexicon",
                    line,
                    format!("factor {} must be positive", row.factor),
                ));
            }
            let negator = match row.negator.to_ascii_lowercase().as_str() {
                "1" | "true" => true,
                "0" | "false" | "" => false,
                other => {
                    return Err(DataError::malformed(
                        "sentiment lexicon",
                        line,
                        format!("negator must be 0/1, got {other:?}"),
                    ))
                }
            };
            entries.insert(
                row.word.to_lowercase(),
                LexiconEntry {
                    polarity: row.polarity,
                    factor: row.factor,
                    negator,
                },
            );
        }
        Ok(SentimentLexicon { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DataError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| DataError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_LEXICON).expect("shipped sentiment lexicon is valid")
    }

    pub fn get(&self, word: &str) -> Option<&LexiconEntry> {
        self.entries.get(word)
    }

    pub fn insert(&mut self, word: &str, entry: LexiconEntry) {
        self.entries.insert(word.to_lowercase(), entry);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Words carrying polarity (no boosters or negators), sorted.
    pub fn sentiment_words(&self) -> Vec<&str> {
        let mut words: Vec<&str> = self
            .entries
            .iter()
            .filter(|(_, e)| e.is_sentiment() && e.polarity != 0.0)
            .map(|(w, _)| w.as_str())
            .collect();
        words.sort_unstable();
        words
    }

    fn is_negator(&self, word: &str) -> bool {
        self.entries.get(word).is_some_and(|e| e.negator)
    }
}

fn line_of(e: &csv::Error) -> usize {
    e.position().map_or(0, |p| p.line() as usize)
}

/// Mean polarity of the sentiment entries in `tokens`, after negation and
/// booster scaling, clamped to [-1, 1]. No hits gives 0.
pub fn polarity_of_tokens<S: AsRef<str>>(tokens: &[S], lexicon: &SentimentLexicon) -> f64 {
    let mut sum = 0.0;
    let mut hits = 0usize;
    let mut boost = 1.0;
    for (i, token) in tokens.iter().enumerate() {
        let Some(entry) = lexicon.get(token.as_ref()) else {
            continue;
        };
        if entry.is_booster() {
            boost *= entry.factor;
            continue;
        }
        if !entry.is_sentiment() {
            continue;
        }
        let mut value = entry.polarity * boost;
        boost = 1.0;
        let window = &tokens[i.saturating_sub(NEGATION_WINDOW)..i];
        if window.iter().any(|t| lexicon.is_negator(t.as_ref())) {
            value *= NEGATION_FACTOR;
        }
        sum += value;
        hits += 1;
    }
    if hits == 0 {
        0.0
    } else {
        (sum / hits as f64).clamp(-1.0, 1.0)
    }
}

pub fn sentence_polarity(sentence: &str, lexicon: &SentimentLexicon) -> f64 {
    polarity_of_tokens(&tokenize(sentence), lexicon)
}

/// Each NOUN lemma of `doc` with the mean polarity of the sentences that
/// contain it.
pub fn aspect_polarities(doc: &Document, lexicon: &SentimentLexicon) -> BTreeMap<String, f64> {
    let mut sums: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    for (s, span) in doc.sentences.iter().enumerate() {
        let polarity = polarity_of_tokens(doc.sentence_tokens(s), lexicon);
        let nouns: BTreeSet<&str> = span
            .clone()
            .filter(|&i| doc.tags[i] == PosClass::Noun)
            .map(|i| doc.lemmas[i].as_str())
            .collect();
        for noun in nouns {
            let slot = sums.entry(noun.to_string()).or_insert((0.0, 0));
            slot.0 += polarity;
            slot.1 += 1;
        }
    }
    sums.into_iter()
        .map(|(k, (sum, n))| (k, sum / n as f64))
        .collect()
}

/// Fraction of the aspect union whose labels agree in both documents.
pub fn aspect_sentiment_match(
    a: &Document,
    b: &Document,
    lexicon: &SentimentLexicon,
    config: &SentimentConfig,
) -> f64 {
    let pa = aspect_polarities(a, lexicon);
    let pb = aspect_polarities(b, lexicon);
    let union = pa.keys().chain(pb.keys()).collect::<BTreeSet<_>>().len();
    if union == 0 {
        return 0.0;
    }
    let matches = pa
        .iter()
        .filter_map(|(aspect, &p)| pb.get(aspect).map(|&q| (p, q)))
        .filter(|&(p, q)| {
            let la = SentimentLabel::from_polarity(p, config.neutral_threshold);
            let lb = SentimentLabel::from_polarity(q, config.neutral_threshold);
            la == lb && (la != SentimentLabel::Neutral || config.count_neutral_matches)
        })
        .count();
    matches as f64 / union as f64
}
