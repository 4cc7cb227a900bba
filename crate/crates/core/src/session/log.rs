//! Append-only JSON Lines event log, one file per session.

use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::model::{ExportedPoint, Session, SessionExport, Snippet, TimelinePoint, Timestamp, EXPORT_FORMAT};
use super::SessionError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum EventBody {
    SessionCreated { id: String },
    SnippetAdded(Snippet),
    DraftUpdated { draft: String, point: TimelinePoint },
}

/// One log line: `{"at":…,"kind":…,"payload":…}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub at: Timestamp,
    #[serde(flatten)]
    pub body: EventBody,
}

/// Session state as a fold over its events.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionState {
    pub session: Session,
    /// Draft snapshot behind each timeline point, same indices.
    pub snapshots: Vec<String>,
    pub last_event_at: Timestamp,
}

impl SessionState {
    /// Validates `event` against the current state, then applies it.
    /// On error the state is unchanged.
    pub fn apply_mut(&mut self, event: &Event) -> Result<(), String> {
        if event.at <= self.last_event_at {
            return Err(format!("timestamp {} does not increase", event.at));
        }
        match &event.body {
            EventBody::SessionCreated { .. } => return Err("duplicate session_created".into()),
            EventBody::SnippetAdded(snippet) => self.session.snippets.push(snippet.clone()),
            EventBody::DraftUpdated { draft, point } => {
                let known = |k: &String| self.session.snippets.iter().any(|sn| &sn.id == k);
                if let Some(unknown) = point.per_snippet.keys().find(|k| !known(k)) {
                    return Err(format!("point references unknown snippet {unknown}"));
                }
                self.session.draft = draft.clone();
                self.session.timeline.push(point.clone());
                self.snapshots.push(draft.clone());
            }
        }
        self.last_event_at = event.at;
        Ok(())
    }

    pub fn apply(state: Option<SessionState>, event: &Event) -> Result<SessionState, String> {
        match (state, &event.body) {
            (None, EventBody::SessionCreated { id }) => Ok(SessionState {
                session: Session {
                    id: id.clone(),
                    created_at: event.at,
                    draft: String::new(),
                    snippets: Vec::new(),
                    timeline: Vec::new(),
                },
                snapshots: Vec::new(),
                last_event_at: event.at,
            }),
            (None, _) => Err("log does not start with session_created".into()),
            (Some(mut s), _) => {
                s.apply_mut(event)?;
                Ok(s)
            }
        }
    }

    pub fn fold<'a>(events: impl IntoIterator<Item = &'a Event>) -> Result<SessionState, String> {
        let mut state = None;
        for e in events {
            state = Some(SessionState::apply(state, e)?);
        }
        state.ok_or_else(|| "empty log".into())
    }

    pub fn export(&self) -> SessionExport {
        let s = &self.session;
        SessionExport {
            format: EXPORT_FORMAT.into(),
            id: s.id.clone(),
            created_at: s.created_at,
            draft: s.draft.clone(),
            snippets: s.snippets.clone(),
            timeline: s
                .timeline
                .iter()
                .zip(&self.snapshots)
                .map(|(p, d)| ExportedPoint::new(d, p))
                .collect(),
        }
    }
}

/// Serializes an export with two-space indentation and a trailing newline.
pub fn export_bytes(export: &SessionExport) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(export).expect("export serializes");
    out.push(b'\n');
    out
}

pub fn log_path(dir: &Path, id: &str) -> PathBuf {
    dir.join(format!("{id}.jsonl"))
}

/// Writes events durably: each append is one line, flushed and fsynced
/// before it returns.
#[derive(Debug)]
pub struct LogWriter {
    file: File,
    path: PathBuf,
}

impl LogWriter {
    pub fn create(path: PathBuf) -> Result<Self, SessionError> {
        let file = OpenOptions::new()
            .create_new(true)
            .append(true)
            .open(&path)
            .map_err(|e| SessionError::storage(&path, e))?;
        Ok(LogWriter { file, path })
    }

    pub fn open_append(path: PathBuf) -> Result<Self, SessionError> {
        let file = OpenOptions::new()
            .append(true)
            .open(&path)
            .map_err(|e| SessionError::storage(&path, e))?;
        Ok(LogWriter { file, path })
    }

    pub fn append(&mut self, event: &Event) -> Result<(), SessionError> {
        let mut line = serde_json::to_vec(event).expect("event serializes");
        line.push(b'\n');
        self.file
            .write_all(&line)
            .and_then(|_| self.file.sync_data())
            .map_err(|e| SessionError::storage(&self.path, e))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

/// Reads every event of a log. A final line that is cut off mid-write is
/// an unacknowledged append: it is dropped and, with `repair`, truncated
/// from the file. Corruption anywhere else is an error.
pub fn read_log(path: &Path, repair: bool) -> Result<Vec<Event>, SessionError> {
    let mut file = OpenOptions::new()
        .read(true)
        .write(repair)
        .open(path)
        .map_err(|e| SessionError::storage(path, e))?;
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes).map_err(|e| SessionError::storage(path, e))?;

    let mut events = Vec::new();
    let mut offset = 0usize;
    let mut good_end = 0usize;
    while offset < bytes.len() {
        let end = bytes[offset..].iter().position(|&b| b == b'\n').map(|i| offset + i);
        let line = &bytes[offset..end.unwrap_or(bytes.len())];
        let parsed = serde_json::from_slice::<Event>(line);
        match (parsed, end) {
            (Ok(e), Some(nl)) => {
                events.push(e);
                offset = nl + 1;
                good_end = offset;
            }
            (Ok(e), None) => {
                // Complete record whose newline never made it.
                events.push(e);
                if repair {
                    file.seek(SeekFrom::End(0))
                        .and_then(|_| file.write_all(b"\n"))
                        .and_then(|_| file.sync_data())
                        .map_err(|err| SessionError::storage(path, err))?;
                }
                good_end = bytes.len();
                break;
            }
            (Err(_), None) => {
                tracing::warn!(path = %path.display(), "dropping truncated final log line");
                break;
            }
            (Err(_), Some(nl)) if line.iter().all(u8::is_ascii_whitespace) => {
                offset = nl + 1;
                good_end = offset;
            }
            (Err(err), Some(_)) => {
                let line_no = bytes[..offset].iter().filter(|&&b| b == b'\n').count() + 1;
                return Err(SessionError::Corrupt {
                    path: path.to_path_buf(),
                    message: format!("line {line_no}: {err}"),
                });
            }
        }
    }
    if repair && good_end < bytes.len() {
        file.set_len(good_end as u64)
            .and_then(|_| file.sync_data())
            .map_err(|e| SessionError::storage(path, e))?;
    }
    Ok(events)
}

/// Rebuilds a session from its log file alone.
pub fn replay(path: &Path) -> Result<SessionState, SessionError> {
    let events = read_log(path, false)?;
    SessionState::fold(&events).map_err(|message| SessionError::Corrupt {
        path: path.to_path_buf(),
        message,
    })
}
