//! Counterfactual scoring: every response, AI or not, is scored against its
//! task's suggestion with the same computation.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::record::{Task, TrialRecord};
use super::HarnessError;
use crate::analyzer::Analyzer;
use crate::embedding::{EmbedError, EmbeddingProvider};
use crate::metrics::MetricVector;
use crate::text::Document;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredTrial {
    pub record: TrialRecord,
    pub metrics: MetricVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreFailure {
    /// Index into the input record list.
    pub index: usize,
    pub participant_id: String,
    pub task: Task,
    pub error: String,
}

/// Successful scores in input order plus the records that could not be scored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreRun {
    pub scored: Vec<ScoredTrial>,
    pub failures: Vec<ScoreFailure>,
}

pub fn score_corpus(
    records: &[TrialRecord],
    analyzer: &Analyzer,
    provider: &dyn EmbeddingProvider,
) -> ScoreRun {
    // Suggestions repeat per task, so parse each distinct one once.
    let mut references: HashMap<&str, Document> = HashMap::new();
    for r in records {
        references
            .entry(r.suggestion_text.as_str())
            .or_insert_with(|| analyzer.document(&r.suggestion_text));
    }
    let results: Vec<Result<MetricVector, EmbedError>> = records
        .par_iter()
        .map(|r| {
            let response = analyzer.document(&r.response_text);
            analyzer.metric_vector(&response, &references[r.suggestion_text.as_str()], provider)
        })
        .collect();

    let mut run = ScoreRun::default();
    for (index, (record, result)) in records.iter().zip(results).enumerate() {
        match result {
            Ok(metrics) => run.scored.push(ScoredTrial {
                record: record.clone(),
                metrics,
            }),
            Err(e) => {
                tracing::warn!(participant = %record.participant_id, task = %record.task, "scoring failed: {e}");
                run.failures.push(ScoreFailure {
                    index,
                    participant_id: record.participant_id.clone(),
                    task: record.task,
                    error: e.to_string(),
                })
            }
        }
    }
    run
}

pub fn write_scored_jsonl(scored: &[ScoredTrial], mut out: impl Write) -> Result<(), HarnessError> {
    for s in scored {
        serde_json::to_writer(&mut out, s).map_err(|e| HarnessError::Output(e.to_string()))?;
        out.write_all(b"\n").map_err(|e| HarnessError::Output(e.to_string()))?;
    }
    Ok(())
}

pub fn read_scored_jsonl(reader: impl BufRead) -> Result<Vec<ScoredTrial>, HarnessError> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| HarnessError::Parse { line: idx + 1, message: e.to_string() })?;
        if line.trim().is_empty() {
            continue;
        }
        let s: ScoredTrial = serde_json::from_str(&line)
            .map_err(|e| HarnessError::Parse { line: idx + 1, message: e.to_string() })?;
        out.push(s);
    }
    Ok(out)
}
