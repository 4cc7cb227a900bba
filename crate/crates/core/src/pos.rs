//! Coarse part-of-speech tagging from a word lexicon plus suffix rules.
//!
//! The tagger is a pure function of the token list and the loaded
//! [`TagLexicon`]. For every token, in order:
//!
//! 1. lexicon lookup;
//! 2. contextual patches: a lexicon VERB directly after a DET becomes a NOUN,
//!    and a lexicon miss ending in `-ly` becomes an ADV;
//! 3. suffix rules, longest suffix first;
//! 4. NOUN.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::DataError;

/// The 11-class coarse tagset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosClass {
    Noun,
    Verb,
    Adj,
    Adv,
    Pron,
    Det,
    Adp,
    Conj,
    Num,
    Prt,
    X,
}

impl PosClass {
    pub const ALL: [PosClass; 11] = [
        PosClass::Noun,
        PosClass::Verb,
        PosClass::Adj,
        PosClass::Adv,
        PosClass::Pron,
        PosClass::Det,
        PosClass::Adp,
        PosClass::Conj,
        PosClass::Num,
        PosClass::Prt,
        PosClass::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosClass::Noun => "NOUN",
            PosClass::Verb => "VERB",
            PosClass::Adj => "ADJ",
            PosClass::Adv => "ADV",
            PosClass::Pron => "PRON",
            PosClass::Det => "DET",
            PosClass::Adp => "ADP",
            PosClass::Conj => "CONJ",
            PosClass::Num => "NUM",
            PosClass::Prt => "PRT",
            PosClass::X => "X",
        }
    }

    /// Tie-break rank when a lexicon lists a word under several classes;
    /// lower wins. Follows declaration order: NOUN > VERB > ADJ > ADV > rest.
    pub fn priority(self) -> usize {
        self as usize
    }

    /// Open classes carry lexical content and are the only ones the
    /// lemmatizer rewrites.
    pub fn is_open(self) -> bool {
        matches!(
            self,
            PosClass::Noun | PosClass::Verb | PosClass::Adj | PosClass::Adv
        )
    }
}

impl fmt::Display for PosClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosClass::ALL
            .iter()
            .copied()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown POS class {s:?}"))
    }
}

const DEFAULT_SUFFIX_RULES: &[(&str, PosClass)] = &[
    ("'s", PosClass::Noun),
    ("ness", PosClass::Noun),
    ("ment", PosClass::Noun),
    ("tion", PosClass::Noun),
    ("sion", PosClass::Noun),
    ("ity", PosClass::Noun),
    ("ism", PosClass::Noun),
    ("ist", PosClass::Noun),
    ("ship", PosClass::Noun),
    ("hood", PosClass::Noun),
    ("ance", PosClass::Noun),
    ("ence", PosClass::Noun),
    ("dom", PosClass::Noun),
    ("ous", PosClass::Adj),
    ("ful", PosClass::Adj),
    ("less", PosClass::Adj),
    ("ive", PosClass::Adj),
    ("able", PosClass::Adj),
    ("ible", PosClass::Adj),
    ("ical", PosClass::Adj),
    ("al", PosClass::Adj),
    ("ic", PosClass::Adj),
    ("ish", PosClass::Adj),
    ("ize", PosClass::Verb),
    ("ise", PosClass::Verb),
    ("ify", PosClass::Verb),
    ("ing", PosClass::Verb),
    ("ed", PosClass::Verb),
    ("wards", PosClass::Adv),
    ("ward", PosClass::Adv),
    ("ly", PosClass::Adv),
];

const DEFAULT_LEXICON: &str = include_str!("../data/pos_lexicon.tsv");

/// Word → class map plus ordered suffix fallbacks.
#[derive(Debug, Clone)]
pub struct TagLexicon {
    entries: HashMap<String, PosClass>,
    suffix_rules: Vec<(String, PosClass)>,
}

impl TagLexicon {
    /// Builds a lexicon from `(word, class)` pairs. Duplicate words keep the
    /// class with the best [`PosClass::priority`]. Suffix rules are sorted
    /// longest-first; equal lengths keep their given order.
    pub fn new(
        entries: impl IntoIterator<Item = (String, PosClass)>,
        suffix_rules: impl IntoIterator<Item = (String, PosClass)>,
    ) -> Self {
        let mut map: HashMap<String, PosClass> = HashMap::new();
        for (word, class) in entries {
            map.entry(word.to_lowercase())
                .and_modify(|c| {
                    if class.priority() < c.priority() {
                        *c = class;
                    }
                })
                .or_insert(class);
        }
        let mut rules: Vec<(String, PosClass)> = suffix_rules.into_iter().collect();
        rules.sort_by_key(|(s, _)| std::cmp::Reverse(s.len()));
        TagLexicon {
            entries: map,
            suffix_rules: rules,
        }
    }

    /// Parses `word<TAB>CLASS` lines. Blank lines and `#` comments are
    /// skipped; anything else malformed is rejected with its 1-based line.
    pub fn parse(text: &str) -> Result<Self, DataError> {
        let mut entries = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let trimmed = line.trim_end_matches('\r');
            if trimmed.trim().is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut cols = trimmed.split('\t');
            let (Some(word), Some(class), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(DataError::malformed("POS lexicon", line_no, "expected word<TAB>CLASS"));
            };
            let word = word.trim();
            if word.is_empty() || !word.chars().all(|c| c.is_ascii_alphabetic() || c == '\'') {
                return Err(DataError::malformed(
                    "POS lexicon",
                    line_no,
                    format!("invalid word {word:?}"),
                ));
            }
            let class = class
                .parse::<PosClass>()
                .map_err(|e| DataError::malformed("POS lexicon", line_no, e))?;
            entries.push((word.to_string(), class));
        }
        Ok(Self::new(entries, default_suffix_rules()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DataError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| DataError::io(path, e))?;
        Self::parse(&text)
    }

    /// The lexicon shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_LEXICON).expect("shipped POS lexicon is valid")
    }

    pub fn lookup(&self, word: &str) -> Option<PosClass> {
        self.entries.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, PosClass)> {
        self.entries.iter().map(|(w, c)| (w.as_str(), *c))
    }

    pub fn suffix_rules(&self) -> &[(String, PosClass)] {
        &self.suffix_rules
    }

    /// Class of the base form of an unlisted `-s` inflection, when the base
    /// is a listed noun or verb or carries a verb suffix.
    fn by_plural_or_third_person(&self, word: &str) -> Option<PosClass> {
        if word.len() < 4 || !word.ends_with('s') || word.ends_with("ss") {
            return None;
        }
        let stem = &word[..word.len() - 1];
        let mut bases = vec![stem.to_string()];
        if let Some(s) = stem.strip_suffix('e') {
            bases.push(s.to_string());
        }
        if let Some(s) = word.strip_suffix("ies") {
            bases.push(format!("{s}y"));
        }
        bases
            .iter()
            .filter_map(|b| self.lookup(b))
            .find(|c| matches!(c, PosClass::Noun | PosClass::Verb))
            .or_else(|| bases.iter().find_map(|b| self.by_suffix(b).filter(|c| *c == PosClass::Verb)))
    }

    fn by_suffix(&self, word: &str) -> Option<PosClass> {
        self.suffix_rules
            .iter()
            .find(|(suffix, _)| word.len() > suffix.len() && word.ends_with(suffix.as_str()))
            .map(|(_, class)| *class)
    }

    /// Tags a token sequence. Output length always equals input length.
    pub fn tag<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<PosClass> {
        let mut out: Vec<PosClass> = Vec::with_capacity(tokens.len());
        for (i, token) in tokens.iter().enumerate() {
            let word = token.as_ref();
            let prev = out.last().copied();
            let after_subject = i > 0 && SUBJECT_PRONOUNS.contains(&tokens[i - 1].as_ref());
            let class = match self.lookup(word) {
                Some(PosClass::Verb) if prev == Some(PosClass::Det) => PosClass::Noun,
                Some(PosClass::Noun) if after_subject => PosClass::Verb,
                Some(class) => class,
                None if word.len() > 2 && word.ends_with("ly") => PosClass::Adv,
                None => self
                    .by_plural_or_third_person(word)
                    .map(|c| if after_subject { PosClass::Verb } else { c })
                    .or_else(|| self.by_suffix(word))
                    .unwrap_or(PosClass::Noun),
            };
            out.push(class);
        }
        out
    }
}

impl Default for TagLexicon {
    fn default() -> Self {
        Self::builtin()
    }
}

/// A noun reading right after one of these is retagged as a verb.
const SUBJECT_PRONOUNS: [&str; 6] = ["i", "we", "you", "he", "she", "they"];

pub fn default_suffix_rules() -> Vec<(String, PosClass)> {
    DEFAULT_SUFFIX_RULES
        .iter()
        .map(|(s, c)| (s.to_string(), *c))
        .collect()
}
