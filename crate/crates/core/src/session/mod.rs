//! Live writing sessions: snippets of AI output, an evolving draft, and a
//! timeline of alignment scores recomputed on every draft update.
//!
//! State is event-sourced. Each session owns an append-only JSON Lines log
//! under the data directory; the in-memory view is a fold over that log and
//! is rebuilt from it on startup. An export is a pure function of the fold,
//! so replaying a log reproduces the export byte for byte.

pub mod http;
mod log;
mod model;
mod store;

use std::path::{Path, PathBuf};

pub use log::{export_bytes, log_path, read_log, replay, Event, EventBody, LogWriter, SessionState};
pub use model::{
    ExportedPoint, PointScores, Session, SessionExport, Snippet, TimelinePoint, Timestamp,
    EXPORT_FORMAT,
};
pub use store::{score_draft, SessionStore, StoreConfig, DEFAULT_DEBOUNCE};

use crate::analyzer::Analyzer;
use crate::embedding::EmbeddingProvider;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SessionError {
    #[error("unknown session {0}")]
    UnknownSession(String),
    #[error("snippet text is empty")]
    EmptySnippet,
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("storage failure: {0}")]
    Storage(String),
    #[error("corrupt session log {}: {message}", .path.display())]
    Corrupt { path: PathBuf, message: String },
}

impl SessionError {
    pub(crate) fn storage(path: &Path, e: std::io::Error) -> Self {
        SessionError::Storage(format!("{}: {e}", path.display()))
    }
}

/// Recomputes every timeline point of an export from its draft snapshots
/// and snippets, returning a description of each disagreement.
pub fn verify_export(
    export: &SessionExport,
    analyzer: &Analyzer,
    provider: &dyn EmbeddingProvider,
) -> Vec<String> {
    let docs: Vec<(String, crate::text::Document)> = export
        .snippets
        .iter()
        .map(|s| (s.id.clone(), analyzer.document(&s.text)))
        .collect();
    let mut problems = Vec::new();
    for (i, point) in export.timeline.iter().enumerate() {
        let present: Vec<(String, crate::text::Document)> = docs
            .iter()
            .filter(|(id, _)| point.per_snippet.contains_key(id))
            .cloned()
            .collect();
        if present.len() != point.per_snippet.len() {
            problems.push(format!("point {i}: references snippets missing from the export"));
            continue;
        }
        let draft = analyzer.document(&point.draft);
        let (per_snippet, _) = score_draft(analyzer, provider, &draft, &present);
        if per_snippet != point.per_snippet {
            problems.push(format!("point {i}: per-snippet scores differ on recomputation"));
        }
        if PointScores::max_of(point.per_snippet.values()) != point.aggregate {
            problems.push(format!("point {i}: aggregate is not the per-metric max"));
        }
        if point.draft.chars().count() != point.draft_length {
            problems.push(format!("point {i}: draft_length does not match the snapshot"));
        }
        if i > 0 && point.at <= export.timeline[i - 1].at {
            problems.push(format!("point {i}: timestamp does not increase"));
        }
    }
    problems
}
