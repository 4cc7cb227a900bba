//! The session store: in-memory state folded from per-session event logs,
//! with one serialized writer per session.
//!
//! All methods block; the HTTP layer calls them from blocking tasks.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Condvar, Mutex, RwLock};
use std::time::Duration;

use tokio::sync::broadcast;

use super::log::{export_bytes, log_path, read_log, Event, EventBody, LogWriter, SessionState};
use super::model::{PointScores, Session, SessionExport, Snippet, TimelinePoint, Timestamp};
use super::SessionError;
use crate::analyzer::Analyzer;
use crate::embedding::{EmbeddingProvider, Health};
use crate::metrics::{self, embedding_cosine};
use crate::text::Document;

pub const DEFAULT_DEBOUNCE: Duration = Duration::from_millis(500);
const WAIT_LIMIT: Duration = Duration::from_secs(60);
const CHANNEL_CAPACITY: usize = 64;

struct Writer {
    log: LogWriter,
    snippet_docs: Vec<(String, Document)>,
    /// Sequence number of the newest draft update written.
    applied: u64,
}

#[derive(Default)]
struct Produced {
    seq: u64,
    result: Option<Result<TimelinePoint, SessionError>>,
}

struct Slot {
    writer: Mutex<Writer>,
    state: RwLock<SessionState>,
    requested: Mutex<u64>,
    produced: Mutex<Produced>,
    produced_cv: Condvar,
    events: broadcast::Sender<TimelinePoint>,
}

impl Slot {
    fn new(state: SessionState, log: LogWriter, analyzer: &Analyzer) -> Self {
        let snippet_docs = state
            .session
            .snippets
            .iter()
            .map(|s| (s.id.clone(), analyzer.document(&s.text)))
            .collect();
        let (events, _) = broadcast::channel(CHANNEL_CAPACITY);
        Slot {
            writer: Mutex::new(Writer { log, snippet_docs, applied: 0 }),
            state: RwLock::new(state),
            requested: Mutex::new(0),
            produced: Mutex::new(Produced::default()),
            produced_cv: Condvar::new(),
            events,
        }
    }

    fn publish(&self, seq: u64, result: Result<TimelinePoint, SessionError>) {
        let mut p = self.produced.lock().unwrap();
        if seq >= p.seq {
            p.seq = seq;
            p.result = Some(result);
        }
        self.produced_cv.notify_all();
    }

    /// Blocks until a draft update with sequence `seq` or newer has been
    /// written, and returns its outcome.
    fn wait_for(&self, seq: u64) -> Result<TimelinePoint, SessionError> {
        let guard = self.produced.lock().unwrap();
        let (guard, timeout) = self
            .produced_cv
            .wait_timeout_while(guard, WAIT_LIMIT, |p| p.seq < seq)
            .unwrap();
        if timeout.timed_out() {
            return Err(SessionError::Storage("timed out waiting for coalesced update".into()));
        }
        guard.result.clone().expect("published with a result")
    }
}

#[derive(Debug, Clone)]
pub struct StoreConfig {
    pub data_dir: PathBuf,
    /// Draft updates arriving within this window coalesce.
    pub debounce: Duration,
}

impl StoreConfig {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        StoreConfig {
            data_dir: data_dir.into(),
            debounce: DEFAULT_DEBOUNCE,
        }
    }

    pub fn with_debounce(mut self, debounce: Duration) -> Self {
        self.debounce = debounce;
        self
    }
}

pub struct SessionStore {
    config: StoreConfig,
    analyzer: Arc<Analyzer>,
    provider: Arc<dyn EmbeddingProvider>,
    sessions: RwLock<HashMap<String, Arc<Slot>>>,
}

impl std::fmt::Debug for SessionStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SessionStore")
            .field("config", &self.config)
            .field("sessions", &self.sessions.read().unwrap().len())
            .finish()
    }
}

/// Scores a draft against every snippet. Embedding failures leave that
/// score absent and mark the result partial.
pub fn score_draft(
    analyzer: &Analyzer,
    provider: &dyn EmbeddingProvider,
    draft: &Document,
    snippets: &[(String, Document)],
) -> (BTreeMap<String, PointScores>, bool) {
    let mut partial = false;
    let mut per_snippet = BTreeMap::new();
    for (id, doc) in snippets {
        let (jaccard, pos_tf_isf_cosine, sentiment_match) =
            metrics::local_scores(draft, doc, &analyzer.sentiment, &analyzer.sentiment_config);
        let embedding = match embedding_cosine(draft, doc, provider) {
            Ok(v) => Some(v),
            Err(e) => {
                tracing::warn!(snippet = %id, "embedding unavailable: {e}");
                partial = true;
                None
            }
        };
        per_snippet.insert(
            id.clone(),
            PointScores {
                jaccard,
                pos_tf_isf_cosine,
                embedding_cosine: embedding,
                sentiment_match,
            },
        );
    }
    (per_snippet, partial)
}

impl SessionStore {
    /// Opens the data directory, replaying every `*.jsonl` log in it.
    /// Unreadable logs are skipped with an error message in the trace.
    pub fn open(
        config: StoreConfig,
        analyzer: Arc<Analyzer>,
        provider: Arc<dyn EmbeddingProvider>,
    ) -> Result<Self, SessionError> {
        std::fs::create_dir_all(&config.data_dir)
            .map_err(|e| SessionError::storage(&config.data_dir, e))?;
        let mut sessions = HashMap::new();
        let entries = std::fs::read_dir(&config.data_dir)
            .map_err(|e| SessionError::storage(&config.data_dir, e))?;
        for entry in entries {
            let path = entry.map_err(|e| SessionError::storage(&config.data_dir, e))?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("jsonl") {
                continue;
            }
            match Self::recover(&path, &analyzer) {
                Ok(slot) => {
                    let id = slot.state.read().unwrap().session.id.clone();
                    sessions.insert(id, Arc::new(slot));
                }
                Err(e) => tracing::error!(path = %path.display(), "skipping session log: {e}"),
            }
        }
        tracing::info!(count = sessions.len(), dir = %config.data_dir.display(), "sessions recovered");
        Ok(SessionStore {
            config,
            analyzer,
            provider,
            sessions: RwLock::new(sessions),
        })
    }

    fn recover(path: &Path, analyzer: &Analyzer) -> Result<Slot, SessionError> {
        let events = read_log(path, true)?;
        let state = SessionState::fold(&events).map_err(|message| SessionError::Corrupt {
            path: path.to_path_buf(),
            message,
        })?;
        let log = LogWriter::open_append(path.to_path_buf())?;
        Ok(Slot::new(state, log, analyzer))
    }

    pub fn config(&self) -> &StoreConfig {
        &self.config
    }

    pub fn provider_health(&self) -> Health {
        self.provider.healthcheck()
    }

    fn slot(&self, id: &str) -> Result<Arc<Slot>, SessionError> {
        self.sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| SessionError::UnknownSession(id.to_string()))
    }

    pub fn session_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.sessions.read().unwrap().keys().cloned().collect();
        ids.sort();
        ids
    }

    pub fn create_session(&self) -> Result<Session, SessionError> {
        let id = uuid::Uuid::new_v4().to_string();
        let event = Event {
            at: Timestamp::now(),
            body: EventBody::SessionCreated { id: id.clone() },
        };
        let mut log = LogWriter::create(log_path(&self.config.data_dir, &id))?;
        log.append(&event)?;
        let state = SessionState::fold([&event]).expect("fresh session folds");
        let session = state.session.clone();
        self.sessions
            .write()
            .unwrap()
            .insert(id, Arc::new(Slot::new(state, log, &self.analyzer)));
        Ok(session)
    }

    pub fn get_session(&self, id: &str) -> Result<Session, SessionError> {
        Ok(self.slot(id)?.state.read().unwrap().session.clone())
    }

    pub fn add_snippet(&self, id: &str, text: &str, label: Option<String>) -> Result<Snippet, SessionError> {
        if text.trim().is_empty() {
            return Err(SessionError::EmptySnippet);
        }
        let slot = self.slot(id)?;
        let mut writer = slot.writer.lock().unwrap();
        let (at, n) = {
            let s = slot.state.read().unwrap();
            (Timestamp::after(Some(s.last_event_at)), s.session.snippets.len())
        };
        let snippet = Snippet {
            id: format!("s{}", n + 1),
            text: text.to_string(),
            added_at: at,
            label: label.filter(|l| !l.trim().is_empty()),
        };
        self.commit(&slot, &mut writer, Event {
            at,
            body: EventBody::SnippetAdded(snippet.clone()),
        })?;
        writer
            .snippet_docs
            .push((snippet.id.clone(), self.analyzer.document(text)));
        Ok(snippet)
    }

    /// Appends durably, then applies to the readable state.
    fn commit(&self, slot: &Slot, writer: &mut Writer, event: Event) -> Result<(), SessionError> {
        writer.log.append(&event)?;
        slot.state
            .write()
            .unwrap()
            .apply_mut(&event)
            .map_err(|m| SessionError::Storage(format!("event rejected after append: {m}")))
    }

    /// Replaces the draft and appends a scored timeline point. Calls within
    /// the debounce window coalesce: only the newest draft is scored, and
    /// superseded calls return that newer point.
    pub fn update_draft(&self, id: &str, draft: &str) -> Result<TimelinePoint, SessionError> {
        let slot = self.slot(id)?;
        let seq = {
            let mut r = slot.requested.lock().unwrap();
            *r += 1;
            *r
        };
        if !self.config.debounce.is_zero() {
            std::thread::sleep(self.config.debounce);
        }
        if *slot.requested.lock().unwrap() != seq {
            return slot.wait_for(seq);
        }
        let mut writer = slot.writer.lock().unwrap();
        if writer.applied > seq {
            drop(writer);
            return slot.wait_for(seq);
        }
        let result = self.write_point(&slot, &mut writer, draft);
        if result.is_ok() {
            writer.applied = seq;
        }
        drop(writer);
        slot.publish(seq, result.clone());
        if let Ok(point) = &result {
            // No subscribers is fine.
            let _ = slot.events.send(point.clone());
        }
        result
    }

    fn write_point(&self, slot: &Slot, writer: &mut Writer, draft: &str) -> Result<TimelinePoint, SessionError> {
        let doc = self.analyzer.document(draft);
        let (per_snippet, partial) =
            score_draft(&self.analyzer, self.provider.as_ref(), &doc, &writer.snippet_docs);
        let at = Timestamp::after(Some(slot.state.read().unwrap().last_event_at));
        let point = TimelinePoint {
            at,
            draft_length: draft.chars().count(),
            aggregate: PointScores::max_of(per_snippet.values()),
            per_snippet,
            partial,
        };
        self.commit(slot, writer, Event {
            at,
            body: EventBody::DraftUpdated {
                draft: draft.to_string(),
                point: point.clone(),
            },
        })?;
        Ok(point)
    }

    /// Points strictly after `since`, oldest first.
    pub fn get_timeline(&self, id: &str, since: Option<Timestamp>) -> Result<Vec<TimelinePoint>, SessionError> {
        let slot = self.slot(id)?;
        let state = slot.state.read().unwrap();
        Ok(state
            .session
            .timeline
            .iter()
            .filter(|p| since.is_none_or(|s| p.at > s))
            .cloned()
            .collect())
    }

    pub fn export(&self, id: &str) -> Result<SessionExport, SessionError> {
        Ok(self.slot(id)?.state.read().unwrap().export())
    }

    pub fn export_bytes(&self, id: &str) -> Result<Vec<u8>, SessionError> {
        Ok(export_bytes(&self.export(id)?))
    }

    /// New timeline points as they are written.
    pub fn subscribe(&self, id: &str) -> Result<broadcast::Receiver<TimelinePoint>, SessionError> {
        Ok(self.slot(id)?.events.subscribe())
    }

    pub fn log_path(&self, id: &str) -> Result<PathBuf, SessionError> {
        let slot = self.slot(id)?;
        let path = slot.writer.lock().unwrap().log.path().to_path_buf();
        Ok(path)
    }
}
