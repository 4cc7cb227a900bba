//! Deterministic linguistic preprocessing: word tokens, sentences, lemmas.

use std::collections::{HashMap, HashSet};
use std::ops::Range;
use std::path::Path;

use serde::Serialize;

use crate::error::DataError;
use crate::pos::PosClass;

const DEFAULT_ABBREVIATIONS: &str = include_str!("../data/abbreviations.txt");
const DEFAULT_IRREGULAR: &str = include_str!("../data/irregular.tsv");

/// Extracts maximal `[A-Za-z']+` runs, lowercased. Runs made only of
/// apostrophes are dropped.
pub fn tokenize(raw: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut flush = |current: &mut String| {
        if current.chars().any(|c| c != '\'') {
            tokens.push(std::mem::take(current));
        } else {
            current.clear();
        }
    };
    for ch in raw.chars() {
        if ch.is_ascii_alphabetic() || ch == '\'' {
            current.push(ch.to_ascii_lowercase());
        } else if !current.is_empty() {
            flush(&mut current);
        }
    }
    if !current.is_empty() {
        flush(&mut current);
    }
    tokens
}

/// Words that do not end a sentence when followed by a period.
#[derive(Debug, Clone, Default)]
pub struct Abbreviations {
    words: HashSet<String>,
}

impl Abbreviations {
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.trim_end_matches('.').to_lowercase())
            .collect();
        Abbreviations { words }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DataError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| DataError::io(path, e))?;
        Ok(Self::parse(&text))
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_ABBREVIATIONS)
    }

    /// `word` is the text immediately before the period, e.g. `"Mr"` or `"e.g"`.
    pub fn guards(&self, word: &str) -> bool {
        let lower = word.to_lowercase();
        // The pronoun "I" is far more often sentence-final than an initial.
        let single_letter = lower.len() == 1 && lower != "i" && lower.chars().all(|c| c.is_ascii_alphabetic());
        single_letter || self.words.contains(&lower)
    }
}

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

/// Splits on `.`, `!` or `?` (runs allowed, optionally followed by closing
/// quotes or brackets) when the next character is whitespace or the end of
/// input. A lone period after an abbreviation or single letter does not
/// split. Returned segments are trimmed slices of `raw`; empty ones are
/// dropped.
pub fn split_sentences<'a>(raw: &'a str, abbreviations: &Abbreviations) -> Vec<&'a str> {
    let chars: Vec<(usize, char)> = raw.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        if !is_terminal(ch) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < chars.len() && is_terminal(chars[j].1) {
            j += 1;
        }
        let run_is_single_period = j - i == 1 && ch == '.';
        while j < chars.len() && is_closer(chars[j].1) {
            j += 1;
        }
        let at_boundary = j == chars.len() || chars[j].1.is_whitespace();
        if at_boundary && !(run_is_single_period && abbreviations.guards(word_before(raw, pos))) {
            let end = chars.get(j).map_or(raw.len(), |(p, _)| *p);
            let segment = raw[start..end].trim();
            if !segment.is_empty() {
                out.push(segment);
            }
            start = end;
        }
        i = j;
    }
    let tail = raw[start..].trim();
    if !tail.is_empty() {
        out.push(tail);
    }
    out
}

/// The run of letters, apostrophes and inner periods ending at byte offset
/// `end`.
fn word_before(raw: &str, end: usize) -> &str {
    let head = &raw[..end];
    let begin = head
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_ascii_alphabetic() || matches!(c, '.' | '\''))
        .last()
        .map_or(end, |(p, _)| p);
    &head[begin..]
}

/// Suffix-rule lemmatizer with an irregular-form table consulted first.
#[derive(Debug, Clone, Default)]
pub struct Lemmatizer {
    // surface -> (lemma, restricted class)
    irregular: HashMap<String, Vec<(String, Option<PosClass>)>>,
}

impl Lemmatizer {
    /// Parses `surface<TAB>lemma[<TAB>CLASS]` lines.
    pub fn parse(text: &str) -> Result<Self, DataError> {
        let mut irregular: HashMap<String, Vec<(String, Option<PosClass>)>> = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            let (surface, lemma, class) = match cols.as_slice() {
                [s, l] => (*s, *l, None),
                [s, l, c] => {
                    let class = c
                        .parse::<PosClass>()
                        .map_err(|e| DataError::malformed("irregular table", idx + 1, e))?;
                    (*s, *l, Some(class))
                }
                _ => {
                    return Err(DataError::malformed(
                        "irregular table",
                        idx + 1,
                        "expected surface<TAB>lemma[<TAB>CLASS]",
                    ))
                }
            };
            if surface.is_empty() || lemma.is_empty() {
                return Err(DataError::malformed("irregular table", idx + 1, "empty column"));
            }
            irregular
                .entry(surface.to_lowercase())
                .or_default()
                .push((lemma.to_lowercase(), class));
        }
        Ok(Lemmatizer { irregular })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DataError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| DataError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_IRREGULAR).expect("shipped irregular table is valid")
    }

    /// Iterates `(surface, lemma, class restriction)` table rows.
    pub fn irregular_entries(&self) -> impl Iterator<Item = (&str, &str, Option<PosClass>)> {
        self.irregular.iter().flat_map(|(s, v)| {
            v.iter()
                .map(move |(l, c)| (s.as_str(), l.as_str(), *c))
        })
    }

    fn table(&self, token: &str, tag: PosClass) -> Option<&str> {
        let rows = self.irregular.get(token)?;
        rows.iter()
            .find(|(_, c)| *c == Some(tag))
            .or_else(|| rows.iter().find(|(_, c)| c.is_none()))
            .map(|(l, _)| l.as_str())
    }

    /// Lemma of a lowercase token. Closed-class tokens are returned as-is.
    /// The result is never empty for a non-empty token.
    pub fn lemmatize(&self, token: &str, tag: PosClass) -> String {
        if !tag.is_open() {
            return token.to_string();
        }
        if let Some(lemma) = self.table(token, tag) {
            return lemma.to_string();
        }
        let lemma = match tag {
            PosClass::Noun => {
                let base = strip_possessive(token);
                match self.table(base, tag) {
                    Some(l) => l.to_string(),
                    None => noun_rules(base),
                }
            }
            PosClass::Verb => verb_rules(token),
            PosClass::Adj => adj_rules(token),
            _ => token.to_string(),
        };
        if lemma.is_empty() {
            token.to_string()
        } else {
            lemma
        }
    }
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn is_consonant(c: u8) -> bool {
    c.is_ascii_lowercase() && !is_vowel(c)
}

fn has_vowel(s: &str) -> bool {
    s.bytes().any(|b| is_vowel(b) || b == b'y')
}

fn strip_possessive(token: &str) -> &str {
    let base = token
        .strip_suffix("'s")
        .or_else(|| token.strip_suffix('\''))
        .unwrap_or(token);
    if base.is_empty() {
        token
    } else {
        base
    }
}

fn noun_rules(w: &str) -> String {
    if w.len() <= 3 {
        return w.to_string();
    }
    if w.len() > 4 {
        if let Some(stem) = w.strip_suffix("ies") {
            return format!("{stem}y");
        }
    }
    if ["ss", "us", "is"].iter().any(|s| w.ends_with(s)) {
        return w.to_string();
    }
    if ["sses", "shes", "ches", "xes", "zzes"].iter().any(|s| w.ends_with(s)) {
        return w[..w.len() - 2].to_string();
    }
    match w.strip_suffix('s') {
        Some(stem) => stem.to_string(),
        None => w.to_string(),
    }
}

fn verb_rules(w: &str) -> String {
    if w.len() <= 3 {
        return w.to_string();
    }
    if w.len() > 4 {
        if let Some(stem) = w.strip_suffix("ies").or_else(|| w.strip_suffix("ied")) {
            return format!("{stem}y");
        }
    }
    if let Some(stem) = w.strip_suffix("ing") {
        if w.len() >= 5 && stem.len() >= 2 && has_vowel(stem) {
            return restore_stem(stem);
        }
        return w.to_string();
    }
    if w.ends_with("eed") {
        return w.to_string();
    }
    if let Some(stem) = w.strip_suffix("ed") {
        if stem.len() >= 2 && has_vowel(stem) {
            return restore_stem(stem);
        }
        return w.to_string();
    }
    if ["ss", "us", "is", "as"].iter().any(|s| w.ends_with(s)) {
        return w.to_string();
    }
    if ["sses", "shes", "ches", "xes", "zzes", "oes"].iter().any(|s| w.ends_with(s)) {
        return w[..w.len() - 2].to_string();
    }
    match w.strip_suffix('s') {
        Some(stem) => stem.to_string(),
        None => w.to_string(),
    }
}

fn adj_rules(w: &str) -> String {
    if w.len() <= 4 {
        return w.to_string();
    }
    if let Some(stem) = w.strip_suffix("iest").or_else(|| w.strip_suffix("ier")) {
        return format!("{stem}y");
    }
    if w.len() >= 6 {
        if let Some(stem) = w.strip_suffix("est") {
            return restore_stem(stem);
        }
    }
    if let Some(stem) = w.strip_suffix("er") {
        return restore_stem(stem);
    }
    w.to_string()
}

/// Undoes consonant doubling or restores a dropped final `e` on an
/// inflection stem.
fn restore_stem(stem: &str) -> String {
    let b = stem.as_bytes();
    let n = b.len();
    if n >= 3 && b[n - 1] == b[n - 2] && b"bdgmnprt".contains(&b[n - 1]) {
        return stem[..n - 1].to_string();
    }
    if needs_final_e(stem) {
        return format!("{stem}e");
    }
    stem.to_string()
}

fn needs_final_e(stem: &str) -> bool {
    let b = stem.as_bytes();
    let n = b.len();
    if n < 2 {
        return false;
    }
    let last = b[n - 1];
    let prev = b[n - 2];
    let before = |k: usize| if n > k { Some(b[n - 1 - k]) } else { None };
    match last {
        b'v' | b'c' | b'u' => true,
        b'z' => prev != b'z',
        b'g' => {
            prev == b'd'
                || prev == b'r'
                || (n >= 5 && prev == b'a')
                || (n >= 5 && prev == b'n' && before(2) == Some(b'a'))
                || (n >= 6 && prev == b'n' && before(2) == Some(b'e'))
        }
        b's' => is_vowel(prev) || matches!(prev, b'n' | b'r' | b'p'),
        b'l' => {
            b"bcdfgkptz".contains(&prev)
                || (matches!(prev, b'a' | b'i' | b'o' | b'u') && n >= 3 && before(2).is_some_and(is_consonant))
        }
        b't' => match prev {
            b'a' => (n >= 4 && before(2).is_some_and(|c| is_consonant(c) || c == b'u')) || cvc3(b),
            b'i' => stem.ends_with("writ") || matches!(before(2), Some(b'c' | b'v')) || cvc3(b),
            b'o' | b'u' => n >= 3 && before(2).is_some_and(is_consonant),
            _ => cvc3(b),
        },
        b'r' => {
            matches!(prev, b'a' | b'i' | b'u' | b'o')
                && n >= 3
                && (before(2).is_some_and(is_consonant) || stem.ends_with("quir"))
        }
        b'm' | b'k' | b'p' | b'd' | b'b' => {
            matches!(prev, b'a' | b'i' | b'o' | b'u')
                && n >= 3
                && before(2).is_some_and(is_consonant)
        }
        b'n' => matches!(prev, b'i' | b'u') && n >= 3 && before(2).is_some_and(is_consonant),
        _ => cvc3(b),
    }
}

/// Three-letter consonant-vowel-consonant stems (`hop`, `rat`, `hid`).
fn cvc3(b: &[u8]) -> bool {
    b.len() == 3
        && is_consonant(b[0])
        && matches!(b[1], b'a' | b'i' | b'o' | b'u')
        && is_consonant(b[2])
        && !matches!(b[2], b'w' | b'x' | b'y')
}

/// A text with its derived token, sentence, lemma and tag annotations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Document {
    pub raw: String,
    pub tokens: Vec<String>,
    /// Token index ranges, one per sentence that contains at least one token.
    pub sentences: Vec<Range<usize>>,
    pub lemmas: Vec<String>,
    pub tags: Vec<PosClass>,
}

impl Document {
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn sentence_tokens(&self, idx: usize) -> &[String] {
        &self.tokens[self.sentences[idx].clone()]
    }

    /// `lemma/CLASS` term for token `i`.
    pub fn term(&self, i: usize) -> String {
        format!("{}/{}", self.lemmas[i], self.tags[i])
    }
}
