//! Seeded synthetic corpora with a planted adoption rate.
//!
//! Every participant writes one response per task, AI on one task and
//! NO_AI on the other, alternating by participant. A response is random
//! writer text into which spans copied from the task suggestion are
//! spliced until the requested fraction of its tokens is adopted.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::record::{Condition, Task, TrialRecord};
use super::tasks;
use crate::metrics::SentimentLexicon;
use crate::pos::TagLexicon;
use crate::stats::TLX_ITEMS;
use crate::text::tokenize;

const FUNCTION_WORDS: &[&str] = &[
    "the", "a", "an", "of", "and", "to", "in", "is", "was", "that", "it", "he", "his", "for",
    "with", "as", "but", "on", "at", "by", "this", "not", "had", "they", "him", "from", "or",
    "be", "have", "were", "which", "would", "there", "their", "so", "what", "when", "who", "if",
];

const STORY_WORDS: &[&str] = &[
    "bob", "jimmy", "friend", "friendship", "duty", "loyalty", "police", "officer", "policeman",
    "street", "night", "restaurant", "years", "twenty", "wait", "waited", "promise", "west",
    "doorway", "cigar", "watch", "nose", "arrest", "wanted", "chicago", "note", "plain",
    "clothes", "man", "choice", "decision", "story", "ending", "twist", "law", "old", "friends",
    "meeting", "recognized", "face", "rain", "wind", "cold", "dark", "city", "fortune",
];

/// Baseline item means for the synthetic TLX ratings.
const TLX_BASE: [f64; TLX_ITEMS] = [5.0, 2.7, 2.5, 3.5, 5.0, 2.6];
const EFFORT_ITEM: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub participants: usize,
    /// Fraction of AI response tokens copied from the suggestion.
    pub adoption: f64,
    /// Same for NO_AI responses; normally 0.
    pub no_ai_adoption: f64,
    pub seed: u64,
    /// Added to the AI trials' Effort rating.
    pub effort_shift: f64,
    pub tlx_sd: f64,
    pub min_words: usize,
    pub max_words: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            participants: 40,
            adoption: 0.3,
            no_ai_adoption: 0.0,
            seed: 7,
            effort_shift: 0.0,
            tlx_sd: 1.3,
            min_words: 120,
            max_words: 180,
        }
    }
}

struct Vocabulary {
    content: Vec<String>,
    sentiment: Vec<String>,
}

impl Vocabulary {
    fn builtin() -> Self {
        let tagger = TagLexicon::builtin();
        let mut content: Vec<String> = tagger
            .entries()
            .filter(|(w, c)| c.is_open() && !w.contains('\''))
            .map(|(w, _)| w.to_string())
            .collect();
        content.sort_unstable();
        let sentiment = SentimentLexicon::builtin()
            .sentiment_words()
            .into_iter()
            .map(String::from)
            .collect();
        Vocabulary { content, sentiment }
    }

    fn word<'a>(&'a self, rng: &mut ChaCha8Rng) -> &'a str {
        let roll: f64 = rng.random();
        let pick = |list: &'a [&'static str], rng: &mut ChaCha8Rng| *list.choose(rng).expect("nonempty");
        if roll < 0.40 {
            pick(FUNCTION_WORDS, rng)
        } else if roll < 0.65 {
            pick(STORY_WORDS, rng)
        } else if roll < 0.75 {
            self.sentiment.choose(rng).expect("nonempty")
        } else {
            self.content.choose(rng).expect("nonempty")
        }
    }
}

fn spans_from(source: &[String], count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<String>> {
    let mut spans = Vec::new();
    let mut left = count;
    while left > 0 && !source.is_empty() {
        let len = rng.random_range(3..=8).min(left).min(source.len());
        let start = rng.random_range(0..=source.len() - len);
        spans.push(source[start..start + len].to_vec());
        left -= len;
    }
    spans
}

fn to_prose(words: &[String], rng: &mut ChaCha8Rng) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < words.len() {
        let len = rng.random_range(8..=16).min(words.len() - i);
        let sentence = &words[i..i + len];
        if !out.is_empty() {
            out.push(' ');
        }
        for (j, w) in sentence.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            if j == 0 {
                let mut c = w.chars();
                if let Some(first) = c.next() {
                    out.extend(first.to_uppercase());
                    out.push_str(c.as_str());
                }
            } else {
                out.push_str(w);
            }
        }
        out.push('.');
        i += len;
    }
    out
}

fn response(
    vocab: &Vocabulary,
    suggestion: &[String],
    adoption: f64,
    config: &SynthConfig,
    rng: &mut ChaCha8Rng,
) -> String {
    let total = rng.random_range(config.min_words..=config.max_words.max(config.min_words));
    let copied = (adoption.clamp(0.0, 1.0) * total as f64).round() as usize;
    let mut words: Vec<String> = (0..total - copied).map(|_| vocab.word(rng).to_string()).collect();
    for span in spans_from(suggestion, copied, rng) {
        let at = rng.random_range(0..=words.len());
        words.splice(at..at, span);
    }
    to_prose(&words, rng)
}

fn ratings(shift: f64, config: &SynthConfig, rng: &mut ChaCha8Rng) -> [f64; TLX_ITEMS] {
    let mut out = [0.0; TLX_ITEMS];
    for (i, slot) in out.iter_mut().enumerate() {
        let mean = TLX_BASE[i] + if i == EFFORT_ITEM { shift } else { 0.0 };
        let draw = Normal::new(mean, config.tlx_sd.max(0.0)).expect("finite sd").sample(rng);
        *slot = ((draw.clamp(1.0, 7.0)) * 100.0).round() / 100.0;
    }
    out
}

/// Generates `2 * participants` records, analytical before creative for
/// each participant. Same config, same corpus.
pub fn synth_corpus(config: &SynthConfig) -> Vec<TrialRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let vocab = Vocabulary::builtin();
    let suggestion_tokens: Vec<Vec<String>> = Task::ALL
        .iter()
        .map(|&t| tokenize(tasks::suggestion(t)))
        .collect();
    let minutes: Normal<f64> = Normal::new(17.0, 9.0).expect("finite sd");

    let mut out = Vec::with_capacity(config.participants * 2);
    for p in 0..config.participants {
        let ai_task = if p % 2 == 0 { Task::Analytical } else { Task::Creative };
        for (ti, &task) in Task::ALL.iter().enumerate() {
            let condition = if task == ai_task { Condition::Ai } else { Condition::NoAi };
            let (adoption, shift) = match condition {
                Condition::Ai => (config.adoption, config.effort_shift),
                Condition::NoAi => (config.no_ai_adoption, 0.0),
            };
            let text = response(&vocab, &suggestion_tokens[ti], adoption, config, &mut rng);
            let tlx = ratings(shift, config, &mut rng);
            let time: f64 = (f64::max(minutes.sample(&mut rng), 2.0) * 10.0).round() / 10.0;
            out.push(TrialRecord {
                participant_id: format!("s{:03}", p + 1),
                task,
                condition,
                response_text: text,
                suggestion_text: tasks::suggestion(task).to_string(),
                tlx: Some(tlx),
                completion_min: Some(time),
            });
        }
    }
    out
}
