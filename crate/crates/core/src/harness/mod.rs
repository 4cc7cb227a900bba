//! The batch study pipeline: ingest a trial corpus, score every response
//! against its task suggestion, compare conditions, render tables.
//!
//! ```no_run
//! use adoptscope::harness::{self, AnalysisOptions, CorpusFormat, ReportFormat};
//! use adoptscope::{Analyzer, HashEmbedder};
//!
//! let records = harness::ingest("corpus.csv", CorpusFormat::Csv)?;
//! let run = harness::score_corpus(&records, &Analyzer::shared(), &HashEmbedder);
//! let report = harness::analyze(&run.scored, run.failures.len(), AnalysisOptions::default())?;
//! println!("{}", harness::render_report(&report, ReportFormat::Markdown));
//! # Ok::<(), harness::HarnessError>(())
//! ```

mod compare;
mod record;
mod report;
mod score;
mod synth;
pub mod tasks;

use std::path::{Path, PathBuf};

pub use compare::{
    analyze, compare_overall, compare_tlx_time, compare_within_task, AnalysisOptions,
    AnalysisReport, ComparisonBlock, CorpusSummary, Design, Row, TLX_LABELS,
};
pub use record::{
    ingest, ingest_csv, ingest_jsonl, write_csv, write_jsonl, Condition, CorpusFormat, Task,
    TrialRecord, REQUIRED_COLUMNS, TLX_COLUMNS,
};
pub use report::{fmt3, render_csv, render_markdown, render_report, ReportFormat, CSV_HEADER};
pub use score::{read_scored_jsonl, score_corpus, write_scored_jsonl, ScoreFailure, ScoreRun, ScoredTrial};
pub use synth::{synth_corpus, SynthConfig};

use crate::stats::StatsError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("schema error in column `{column}`{}: {message}", .line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Schema {
        column: String,
        line: Option<usize>,
        message: String,
    },
    #[error("duplicate trial for participant {participant_id}, task {task}: lines {first_line} and {second_line}")]
    DuplicateTrial {
        participant_id: String,
        task: Task,
        first_line: usize,
        second_line: usize,
    },
    #[error("participants without exactly one AI and one NO_AI trial: {}", .participants.join(", "))]
    UnpairedParticipant { participants: Vec<String> },
    #[error("missing {field} on: {}", .trials.join(", "))]
    MissingField { field: String, trials: Vec<String> },
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}
