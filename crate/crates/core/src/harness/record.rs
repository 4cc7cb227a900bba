//! Trial records and corpus ingestion from CSV or JSON Lines.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::stats::TLX_ITEMS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Analytical,
    Creative,
}

impl Task {
    pub const ALL: [Task; 2] = [Task::Analytical, Task::Creative];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Analytical => "analytical",
            Task::Creative => "creative",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "analytical" => Ok(Task::Analytical),
            "creative" => Ok(Task::Creative),
            other => Err(format!("expected analytical or creative, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "NO_AI")]
    NoAi,
    #[serde(rename = "AI")]
    Ai,
}

impl Condition {
    pub fn as_str(self) -> &'static str {
        match self {
            Condition::NoAi => "NO_AI",
            Condition::Ai => "AI",
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Condition::NoAi => Condition::Ai,
            Condition::Ai => Condition::NoAi,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Condition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "AI" => Ok(Condition::Ai),
            "NO_AI" | "NOAI" => Ok(Condition::NoAi),
            other => Err(format!("expected AI or NO_AI, got {other:?}")),
        }
    }
}

/// One participant's response to one task.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub participant_id: String,
    pub task: Task,
    pub condition: Condition,
    pub response_text: String,
    /// The fixed task suggestion. NO_AI trials carry it too, as the
    /// counterfactual reference.
    pub suggestion_text: String,
    pub tlx: Option<[f64; TLX_ITEMS]>,
    pub completion_min: Option<f64>,
}

/// Flat on-disk shape shared by CSV and JSONL.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct FlatRecord {
    participant_id: String,
    task: String,
    condition: String,
    response_text: String,
    suggestion_text: String,
    tlx_1: Option<f64>,
    tlx_2: Option<f64>,
    tlx_3: Option<f64>,
    tlx_4: Option<f64>,
    tlx_5: Option<f64>,
    tlx_6: Option<f64>,
    completion_min: Option<f64>,
}

pub const REQUIRED_COLUMNS: [&str; 5] = [
    "participant_id",
    "task",
    "condition",
    "response_text",
    "suggestion_text",
];

pub const TLX_COLUMNS: [&str; TLX_ITEMS] = ["tlx_1", "tlx_2", "tlx_3", "tlx_4", "tlx_5", "tlx_6"];

impl FlatRecord {
    fn into_record(self, line: usize) -> Result<TrialRecord, HarnessError> {
        let schema = |column: &str, message: String| HarnessError::Schema {
            column: column.to_string(),
            line: Some(line),
            message,
        };
        if self.participant_id.trim().is_empty() {
            return Err(schema("participant_id", "must not be empty".into()));
        }
        if self.suggestion_text.trim().is_empty() {
            return Err(schema("suggestion_text", "must not be empty".into()));
        }
        let task = self.task.parse().map_err(|e| schema("task", e))?;
        let condition = self.condition.parse().map_err(|e| schema("condition", e))?;
        let items = [self.tlx_1, self.tlx_2, self.tlx_3, self.tlx_4, self.tlx_5, self.tlx_6];
        let tlx = if items.iter().all(Option::is_none) {
            None
        } else if let Some(i) = items.iter().position(Option::is_none) {
            return Err(schema(TLX_COLUMNS[i], "partial TLX ratings; give all six or none".into()));
        } else {
            Some(items.map(|x| x.unwrap_or_default()))
        };
        Ok(TrialRecord {
            participant_id: self.participant_id.trim().to_string(),
            task,
            condition,
            response_text: self.response_text,
            suggestion_text: self.suggestion_text,
            tlx,
            completion_min: self.completion_min,
        })
    }

    fn from_record(r: &TrialRecord) -> Self {
        let t = r.tlx.map(|a| a.map(Some)).unwrap_or([None; TLX_ITEMS]);
        FlatRecord {
            participant_id: r.participant_id.clone(),
            task: r.task.to_string(),
            condition: r.condition.to_string(),
            response_text: r.response_text.clone(),
            suggestion_text: r.suggestion_text.clone(),
            tlx_1: t[0],
            tlx_2: t[1],
            tlx_3: t[2],
            tlx_4: t[3],
            tlx_5: t[4],
            tlx_6: t[5],
            completion_min: r.completion_min,
        }
    }
}

impl Serialize for TrialRecord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FlatRecord::from_record(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrialRecord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        FlatRecord::deserialize(d)?
            .into_record(0)
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CorpusFormat {
    #[default]
    Csv,
    Jsonl,
}

impl CorpusFormat {
    /// Guesses from the file extension; anything but `.jsonl`/`.ndjson` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl" | "ndjson") => CorpusFormat::Jsonl,
            _ => CorpusFormat::Csv,
        }
    }
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(CorpusFormat::Csv),
            "jsonl" | "ndjson" => Ok(CorpusFormat::Jsonl),
            other => Err(format!("unknown corpus format {other:?}")),
        }
    }
}

/// Reads and validates a corpus file.
pub fn ingest(path: impl AsRef<Path>, format: CorpusFormat) -> Result<Vec<TrialRecord>, HarnessError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let reader = std::io::BufReader::new(file);
    match format {
        CorpusFormat::Csv => ingest_csv(reader),
        CorpusFormat::Jsonl => ingest_jsonl(reader),
    }
}

pub fn ingest_csv(reader: impl std::io::Read) -> Result<Vec<TrialRecord>, HarnessError> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| HarnessError::Parse { line: 1, message: e.to_string() })?
        .clone();
    for column in REQUIRED_COLUMNS {
        if !headers.iter().any(|h| h == column) {
            return Err(HarnessError::Schema {
                column: column.into(),
                line: None,
                message: "required column is missing".into(),
            });
        }
    }
    let mut rows = Vec::new();
    for result in rdr.records() {
        let record = result.map_err(|e| HarnessError::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let flat: FlatRecord = record
            .deserialize(Some(&headers))
            .map_err(|e| HarnessError::Parse { line, message: e.to_string() })?;
        rows.push((line, flat.into_record(line)?));
    }
    check_unique(rows)
}

pub fn ingest_jsonl(reader: impl BufRead) -> Result<Vec<TrialRecord>, HarnessError> {
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| HarnessError::Parse { line: line_no, message: e.to_string() })?;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(&line)
            .map_err(|e| HarnessError::Parse { line: line_no, message: e.to_string() })?;
        let Some(obj) = value.as_object() else {
            return Err(HarnessError::Parse {
                line: line_no,
                message: "expected a JSON object".into(),
            });
        };
        if let Some(column) = REQUIRED_COLUMNS.iter().find(|c| !obj.contains_key(**c)) {
            return Err(HarnessError::Schema {
                column: column.to_string(),
                line: Some(line_no),
                message: "required field is missing".into(),
            });
        }
        let flat: FlatRecord = serde_json::from_value(value)
            .map_err(|e| HarnessError::Parse { line: line_no, message: e.to_string() })?;
        rows.push((line_no, flat.into_record(line_no)?));
    }
    check_unique(rows)
}

fn check_unique(rows: Vec<(usize, TrialRecord)>) -> Result<Vec<TrialRecord>, HarnessError> {
    let mut seen: HashMap<(String, Task), usize> = HashMap::new();
    let mut out = Vec::with_capacity(rows.len());
    for (line, record) in rows {
        let key = (record.participant_id.clone(), record.task);
        if let Some(&first) = seen.get(&key) {
            return Err(HarnessError::DuplicateTrial {
                participant_id: key.0,
                task: key.1,
                first_line: first,
                second_line: line,
            });
        }
        seen.insert(key, line);
        out.push(record);
    }
    Ok(out)
}

pub fn write_csv(records: &[TrialRecord], out: impl Write) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(FlatRecord::from_record(r))
            .map_err(|e| HarnessError::Output(e.to_string()))?;
    }
    w.flush().map_err(|e| HarnessError::Output(e.to_string()))
}

pub fn write_jsonl(records: &[TrialRecord], mut out: impl Write) -> Result<(), HarnessError> {
    for r in records {
        serde_json::to_writer(&mut out, r).map_err(|e| HarnessError::Output(e.to_string()))?;
        out.write_all(b"\n").map_err(|e| HarnessError::Output(e.to_string()))?;
    }
    Ok(())
}
