//! Oracles shared by the integration suites. Nothing here calls into the
//! library except to build documents for the term-table checks.
#![allow(dead_code)]

use std::collections::BTreeMap;

use adoptscope::metrics::TfIsfVector;
use adoptscope::Analyzer;
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

// Student t CDF by adaptive Simpson integration of the density. The
// normalizing constant comes from the exact recursion for
// Γ(ν/2)/Γ((ν+1)/2), so no special functions are shared with the library.

/// Γ(ν/2) / Γ((ν+1)/2) for integer ν ≥ 1.
fn gamma_ratio(nu: u32) -> f64 {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let (mut r, mut k) = if nu % 2 == 1 { (sqrt_pi, 1) } else { (2.0 / sqrt_pi, 2) };
    while k < nu {
        r *= k as f64 / (k as f64 + 1.0);
        k += 2;
    }
    r
}

fn density(x: f64, nu: u32) -> f64 {
    let v = nu as f64;
    let c = 1.0 / ((v * std::f64::consts::PI).sqrt() * gamma_ratio(nu));
    c * (1.0 + x * x / v).powf(-(v + 1.0) / 2.0)
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (f(a) + 4.0 * f((a + b) / 2.0) + f(b))
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = (a + b) / 2.0;
    let left = simpson(f, a, m);
    let right = simpson(f, m, b);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    adaptive(f, a, m, left, tol / 2.0, depth - 1) + adaptive(f, m, b, right, tol / 2.0, depth - 1)
}

pub fn oracle_cdf(t: f64, nu: u32) -> f64 {
    let f = |x: f64| density(x, nu);
    let mass = adaptive(&f, 0.0, t.abs(), simpson(&f, 0.0, t.abs()), 1e-14, 50);
    if t >= 0.0 {
        0.5 + mass
    } else {
        0.5 - mass
    }
}

// TF-ISF by hand.

/// A hand-written term table: `(term, tf, sf)` plus the sentence count.
pub struct Table {
    pub sentences: usize,
    pub terms: &'static [(&'static str, usize, usize)],
}

impl Table {
    pub fn weights(&self) -> BTreeMap<&'static str, f64> {
        let n = self.sentences as f64;
        self.terms
            .iter()
            .map(|&(t, tf, sf)| (t, tf as f64 * (((1.0 + n) / (1.0 + sf as f64)).ln() + 1.0)))
            .collect()
    }
}

pub fn oracle_cosine(a: &Table, b: &Table) -> f64 {
    let (wa, wb) = (a.weights(), b.weights());
    let mut dot = 0.0;
    for (t, x) in &wa {
        if let Some(y) = wb.get(t) {
            dot += x * y;
        }
    }
    let na = wa.values().map(|w| w * w).sum::<f64>().sqrt();
    let nb = wb.values().map(|w| w * w).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

pub fn assert_table(analyzer: &Analyzer, text: &str, table: &Table) {
    let v = TfIsfVector::from_document(&analyzer.document(text));
    assert_eq!(v.sentence_count, table.sentences, "{text}");
    let got: Vec<(String, usize, usize)> = v
        .term_counts
        .iter()
        .map(|(t, &tf)| (t.clone(), tf, v.sentence_freq[t]))
        .collect();
    let mut want: Vec<(String, usize, usize)> = table
        .terms
        .iter()
        .map(|&(t, tf, sf)| (t.to_string(), tf, sf))
        .collect();
    want.sort();
    assert_eq!(got, want, "{text}");
}

pub const TF_ISF_FIXTURES: &[(&str, Table, &str, Table)] = &[
    (
        "cats run. cats sleep.",
        Table { sentences: 2, terms: &[("cat/NOUN", 2, 2), ("run/VERB", 1, 1), ("sleep/VERB", 1, 1)] },
        "a cat runs.",
        Table { sentences: 1, terms: &[("a/DET", 1, 1), ("cat/NOUN", 1, 1), ("run/VERB", 1, 1)] },
    ),
    (
        "She walked home. He walks to work. She works hard.",
        Table {
            sentences: 3,
            terms: &[
                ("she/PRON", 2, 2),
                ("walk/VERB", 2, 2),
                ("home/NOUN", 1, 1),
                ("he/PRON", 1, 1),
                ("to/PRT", 1, 1),
                ("work/NOUN", 1, 1),
                ("work/VERB", 1, 1),
                ("hard/ADJ", 1, 1),
            ],
        },
        "They walk home.",
        Table { sentences: 1, terms: &[("they/PRON", 1, 1), ("walk/VERB", 1, 1), ("home/NOUN", 1, 1)] },
    ),
    (
        "Writers revise drafts. Editors revise drafts too.",
        Table {
            sentences: 2,
            terms: &[
                ("writer/NOUN", 1, 1),
                ("revise/VERB", 2, 2),
                ("draft/NOUN", 2, 2),
                ("editor/NOUN", 1, 1),
                ("too/ADV", 1, 1),
            ],
        },
        "A writer revises the draft.",
        Table {
            sentences: 1,
            terms: &[
                ("a/DET", 1, 1),
                ("writer/NOUN", 1, 1),
                ("revise/VERB", 1, 1),
                ("the/DET", 1, 1),
                ("draft/NOUN", 1, 1),
            ],
        },
    ),
    (
        "Editors revise drafts too. Writers revise drafts.",
        Table {
            sentences: 2,
            terms: &[
                ("editor/NOUN", 1, 1),
                ("revise/VERB", 2, 2),
                ("draft/NOUN", 2, 2),
                ("too/ADV", 1, 1),
                ("writer/NOUN", 1, 1),
            ],
        },
        "Writers revise drafts. Editors revise drafts too.",
        Table {
            sentences: 2,
            terms: &[
                ("writer/NOUN", 1, 1),
                ("revise/VERB", 2, 2),
                ("draft/NOUN", 2, 2),
                ("editor/NOUN", 1, 1),
                ("too/ADV", 1, 1),
            ],
        },
    ),
    (
        "Cats run.",
        Table { sentences: 1, terms: &[("cat/NOUN", 1, 1), ("run/VERB", 1, 1)] },
        "The dog sleeps quietly.",
        Table {
            sentences: 1,
            terms: &[("the/DET", 1, 1), ("dog/NOUN", 1, 1), ("sleep/VERB", 1, 1), ("quietly/ADV", 1, 1)],
        },
    ),
];

pub fn naive_jaccard(a: &[String], b: &[String]) -> f64 {
    let mut ua: Vec<&String> = Vec::new();
    for t in a {
        if !ua.contains(&t) {
            ua.push(t);
        }
    }
    let mut ub: Vec<&String> = Vec::new();
    for t in b {
        if !ub.contains(&t) {
            ub.push(t);
        }
    }
    let shared = ua.iter().filter(|t| ub.contains(t)).count();
    let union = ua.len() + ub.len() - shared;
    if union == 0 {
        0.0
    } else {
        shared as f64 / union as f64
    }
}

/// Random multi-sentence text over `vocab`, capitalized so each period
/// followed by a space is a sentence boundary.
pub fn random_text(rng: &mut ChaCha8Rng, vocab: &[&str]) -> String {
    let sentences = rng.random_range(1..5);
    (0..sentences)
        .map(|_| {
            let n = rng.random_range(1..14);
            let words: Vec<&str> = (0..n).map(|_| *vocab.choose(rng).unwrap()).collect();
            let s = words.join(" ");
            let mut chars = s.chars();
            let first = chars.next().unwrap().to_ascii_uppercase();
            format!("{first}{}.", chars.as_str())
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Word pool mixing the task suggestions with sentiment-bearing words.
pub fn text_vocabulary() -> Vec<&'static str> {
    let mut words: Vec<&'static str> = adoptscope::harness::tasks::ANALYTICAL_SUGGESTION
        .split(|c: char| !c.is_ascii_alphabetic() && c != '\'')
        .chain(adoptscope::harness::tasks::CREATIVE_SUGGESTION.split(|c: char| !c.is_ascii_alphabetic() && c != '\''))
        .filter(|w| !w.is_empty())
        .collect();
    words.extend([
        "good", "bad", "not", "very", "terrible", "wonderful", "never", "happy", "sad", "garden", "house", "friend",
    ]);
    words.sort_unstable();
    words.dedup();
    words
}

/// One row of the printed-tables golden fixture.
#[derive(Debug, Clone, serde::Deserialize)]
pub struct PrintedRow {
    pub table: u8,
    pub task: Option<adoptscope::harness::Task>,
    pub metric: String,
    pub no_ai_mean: f64,
    pub no_ai_sd: f64,
    pub ai_mean: f64,
    pub ai_sd: f64,
    pub delta: f64,
    pub p: f64,
    pub effect: f64,
}

pub fn printed_rows() -> Vec<PrintedRow> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/printed_tables.csv");
    csv::Reader::from_path(path)
        .unwrap()
        .deserialize()
        .map(|r| r.unwrap())
        .collect()
}

/// Printed rows of one table as report blocks, one block per task. Group
/// sizes are not printed, so `n` is left at 0.
pub fn printed_blocks(table: u8) -> Vec<(adoptscope::harness::ComparisonBlock, Vec<PrintedRow>)> {
    use adoptscope::harness::{ComparisonBlock, Design, Row};
    use adoptscope::stats::{Descriptives, EffectKind, StatResult};

    let rows: Vec<PrintedRow> = printed_rows().into_iter().filter(|r| r.table == table).collect();
    let mut tasks: Vec<Option<adoptscope::harness::Task>> = rows.iter().map(|r| r.task).collect();
    tasks.dedup();
    tasks
        .into_iter()
        .map(|task| {
            let printed: Vec<PrintedRow> = rows.iter().filter(|r| r.task == task).cloned().collect();
            let (design, kind) = if table == 1 {
                (Design::Paired, EffectKind::Dz)
            } else {
                (Design::Independent, EffectKind::D)
            };
            let block = ComparisonBlock {
                title: format!("Table {table}"),
                design,
                task,
                rows: printed
                    .iter()
                    .map(|r| Row {
                        label: r.metric.clone(),
                        result: StatResult::from_summary(
                            Descriptives { n: 0, mean: r.no_ai_mean, sd: r.no_ai_sd },
                            Descriptives { n: 0, mean: r.ai_mean, sd: r.ai_sd },
                            r.p,
                            r.effect,
                            kind,
                        ),
                    })
                    .collect(),
            };
            (block, printed)
        })
        .collect()
}

/// `(label, Δ cell)` for each table row of a rendered markdown report.
pub fn rendered_deltas(markdown: &str) -> Vec<(String, String)> {
    markdown
        .lines()
        .filter(|l| l.starts_with("| ") && !l.starts_with("| Metric"))
        .map(|l| {
            let cells: Vec<&str> = l.split('|').map(str::trim).collect();
            (cells[1].trim_matches('*').to_string(), cells[4].to_string())
        })
        .collect()
}
