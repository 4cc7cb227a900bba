//! AI vs no-AI comparisons over scored trials.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::record::{Condition, Task, TrialRecord};
use super::score::ScoredTrial;
use super::HarnessError;
use crate::metrics::Metric;
use crate::stats::{tlx_total, StatResult, Variance};

pub const TLX_LABELS: [&str; 6] = [
    "Mental demand",
    "Physical demand",
    "Rushed",
    "Accomplishment",
    "Effort",
    "Insecurity",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Design {
    Paired,
    Independent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub label: String,
    pub result: StatResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonBlock {
    pub title: String,
    pub design: Design,
    pub task: Option<Task>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub trials: usize,
    pub participants: usize,
    pub analytical: usize,
    pub creative: usize,
    pub ai: usize,
    pub no_ai: usize,
    pub failed: usize,
    pub dropped_unpaired: Vec<String>,
}

impl CorpusSummary {
    pub fn of(records: &[&TrialRecord]) -> Self {
        let count = |f: &dyn Fn(&TrialRecord) -> bool| records.iter().filter(|r| f(r)).count();
        CorpusSummary {
            trials: records.len(),
            participants: records
                .iter()
                .map(|r| r.participant_id.as_str())
                .collect::<BTreeSet<_>>()
                .len(),
            analytical: count(&|r| r.task == Task::Analytical),
            creative: count(&|r| r.task == Task::Creative),
            ai: count(&|r| r.condition == Condition::Ai),
            no_ai: count(&|r| r.condition == Condition::NoAi),
            failed: 0,
            dropped_unpaired: Vec::new(),
        }
    }
}

/// Blocks in table order: overall, per task, TLX, completion time.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub summary: CorpusSummary,
    pub blocks: Vec<ComparisonBlock>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Drop participants lacking exactly one AI and one NO_AI trial instead
    /// of failing the paired comparison.
    pub allow_unpaired: bool,
    pub variance: Variance,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            allow_unpaired: false,
            variance: Variance::Pooled,
        }
    }
}

/// Paired AI minus NO_AI comparison per participant. Returns the block and
/// the participants dropped when `allow_unpaired` is set.
pub fn compare_overall(
    scored: &[ScoredTrial],
    allow_unpaired: bool,
) -> Result<(ComparisonBlock, Vec<String>), HarnessError> {
    let mut by_participant: BTreeMap<&str, Vec<&ScoredTrial>> = BTreeMap::new();
    for s in scored {
        by_participant.entry(&s.record.participant_id).or_default().push(s);
    }
    let mut pairs = Vec::new();
    let mut offenders = Vec::new();
    for (pid, trials) in by_participant {
        let ai: Vec<_> = trials.iter().filter(|s| s.record.condition == Condition::Ai).collect();
        let no_ai: Vec<_> = trials.iter().filter(|s| s.record.condition == Condition::NoAi).collect();
        match (ai.as_slice(), no_ai.as_slice()) {
            ([a], [n]) => pairs.push((**n, **a)),
            _ => offenders.push(pid.to_string()),
        }
    }
    if !offenders.is_empty() && !allow_unpaired {
        return Err(HarnessError::UnpairedParticipant { participants: offenders });
    }
    let mut rows = Vec::with_capacity(Metric::ALL.len());
    for metric in Metric::ALL {
        let no_ai: Vec<f64> = pairs.iter().map(|(n, _)| n.metrics.get(metric)).collect();
        let ai: Vec<f64> = pairs.iter().map(|(_, a)| a.metrics.get(metric)).collect();
        rows.push(Row {
            label: metric.label().to_string(),
            result: StatResult::paired(&no_ai, &ai)?,
        });
    }
    Ok((
        ComparisonBlock {
            title: "Overall AI vs. no-AI (paired by participant)".into(),
            design: Design::Paired,
            task: None,
            rows,
        },
        offenders,
    ))
}

fn split<T>(
    items: &[T],
    record: impl Fn(&T) -> &TrialRecord,
    task: Task,
) -> (Vec<&T>, Vec<&T>) {
    let in_task = items.iter().filter(|s| record(s).task == task);
    let (ai, no_ai): (Vec<_>, Vec<_>) = in_task.partition(|s| record(s).condition == Condition::Ai);
    (no_ai, ai)
}

/// Independent-groups comparison of each metric within one task.
pub fn compare_within_task(
    scored: &[ScoredTrial],
    task: Task,
    variance: Variance,
) -> Result<ComparisonBlock, HarnessError> {
    let (no_ai, ai) = split(scored, |s| &s.record, task);
    let mut rows = Vec::with_capacity(Metric::ALL.len());
    for metric in Metric::ALL {
        let a: Vec<f64> = no_ai.iter().map(|s| s.metrics.get(metric)).collect();
        let b: Vec<f64> = ai.iter().map(|s| s.metrics.get(metric)).collect();
        rows.push(Row {
            label: metric.label().to_string(),
            result: StatResult::independent(&a, &b, variance)?,
        });
    }
    Ok(ComparisonBlock {
        title: format!("Within-task AI vs. no-AI: {task}"),
        design: Design::Independent,
        task: Some(task),
        rows,
    })
}

/// TLX items, TLX total and completion time for one task, as two blocks.
pub fn compare_tlx_time(
    records: &[TrialRecord],
    task: Task,
    variance: Variance,
) -> Result<Vec<ComparisonBlock>, HarnessError> {
    let (no_ai, ai) = split(records, |r| r, task);
    let lines_missing = |pred: &dyn Fn(&TrialRecord) -> bool| -> Vec<String> {
        no_ai
            .iter()
            .chain(&ai)
            .filter(|r| pred(r))
            .map(|r| format!("{}/{}", r.participant_id, r.task))
            .collect()
    };
    let no_tlx = lines_missing(&|r| r.tlx.is_none());
    if !no_tlx.is_empty() {
        return Err(HarnessError::MissingField { field: "tlx_1..tlx_6".into(), trials: no_tlx });
    }
    let no_time = lines_missing(&|r| r.completion_min.is_none());
    if !no_time.is_empty() {
        return Err(HarnessError::MissingField { field: "completion_min".into(), trials: no_time });
    }

    let column = |group: &[&TrialRecord], f: &dyn Fn(&TrialRecord) -> f64| -> Vec<f64> {
        group.iter().map(|r| f(r)).collect()
    };
    let mut tlx_rows = Vec::with_capacity(7);
    for (i, label) in TLX_LABELS.iter().enumerate() {
        let item = |r: &TrialRecord| r.tlx.map_or(f64::NAN, |t| t[i]);
        tlx_rows.push(Row {
            label: label.to_string(),
            result: StatResult::independent(&column(&no_ai, &item), &column(&ai, &item), variance)?,
        });
    }
    let total = |r: &TrialRecord| r.tlx.map_or(f64::NAN, |t| tlx_total(&t).unwrap_or(f64::NAN));
    tlx_rows.push(Row {
        label: "TLX total".into(),
        result: StatResult::independent(&column(&no_ai, &total), &column(&ai, &total), variance)?,
    });
    let minutes = |r: &TrialRecord| r.completion_min.unwrap_or(f64::NAN);
    let time_rows = vec![Row {
        label: "Completion time (min)".into(),
        result: StatResult::independent(&column(&no_ai, &minutes), &column(&ai, &minutes), variance)?,
    }];
    Ok(vec![
        ComparisonBlock {
            title: format!("NASA-TLX: {task}"),
            design: Design::Independent,
            task: Some(task),
            rows: tlx_rows,
        },
        ComparisonBlock {
            title: format!("Completion time: {task}"),
            design: Design::Independent,
            task: Some(task),
            rows: time_rows,
        },
    ])
}

/// Runs every comparison the data supports. The paired block is required;
/// within-task, TLX and time blocks that cannot be computed become notes.
pub fn analyze(scored: &[ScoredTrial], failed: usize, options: AnalysisOptions) -> Result<AnalysisReport, HarnessError> {
    let records: Vec<&TrialRecord> = scored.iter().map(|s| &s.record).collect();
    let mut summary = CorpusSummary::of(&records);
    summary.failed = failed;
    let mut report = AnalysisReport {
        summary,
        blocks: Vec::new(),
        notes: Vec::new(),
    };

    let (overall, dropped) = compare_overall(scored, options.allow_unpaired)?;
    if !dropped.is_empty() {
        report
            .notes
            .push(format!("dropped {} unpaired participant(s): {}", dropped.len(), dropped.join(", ")));
    }
    report.summary.dropped_unpaired = dropped;
    report.blocks.push(overall);

    for task in Task::ALL {
        match compare_within_task(scored, task, options.variance) {
            Ok(block) => report.blocks.push(block),
            Err(e) => report.notes.push(format!("within-task {task}: {e}")),
        }
    }
    let owned: Vec<TrialRecord> = records.into_iter().cloned().collect();
    let mut tlx = Vec::new();
    let mut time = Vec::new();
    for task in Task::ALL {
        match compare_tlx_time(&owned, task, options.variance) {
            Ok(mut blocks) => {
                time.push(blocks.pop().expect("time block"));
                tlx.push(blocks.pop().expect("tlx block"));
            }
            Err(e) => report.notes.push(format!("TLX/time {task}: {e}")),
        }
    }
    report.blocks.extend(tlx);
    report.blocks.extend(time);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::MetricVector;
    use crate::stats::StatsError;

    fn trial(pid: &str, task: Task, condition: Condition, j: f64) -> ScoredTrial {
        ScoredTrial {
            record: TrialRecord {
                participant_id: pid.into(),
                task,
                condition,
                response_text: String::new(),
                suggestion_text: "s".into(),
                tlx: Some([3.0 + j, 2.0 + 2.0 * j, 2.0 - j, 4.0 + j, 5.0 + 3.0 * j, 3.0 - j]),
                completion_min: Some(10.0 + j),
            },
            metrics: MetricVector {
                jaccard: j,
                pos_tf_isf_cosine: j / 2.0,
                embedding_cosine: 0.5 + j,
                sentiment_match: j * j,
            },
        }
    }

    fn corpus() -> Vec<ScoredTrial> {
        let mut v = Vec::new();
        for i in 0..6 {
            let pid = format!("p{i}");
            let (t_ai, t_no) = if i % 2 == 0 {
                (Task::Analytical, Task::Creative)
            } else {
                (Task::Creative, Task::Analytical)
            };
            v.push(trial(&pid, t_ai, Condition::Ai, 0.2 + 0.03 * i as f64));
            v.push(trial(&pid, t_no, Condition::NoAi, 0.1 + 0.01 * (i * i % 5) as f64));
        }
        v
    }

    #[test]
    fn overall_has_one_row_per_metric() {
        let (block, dropped) = compare_overall(&corpus(), false).unwrap();
        assert!(dropped.is_empty());
        assert_eq!(block.rows.len(), Metric::ALL.len());
        let labels: Vec<_> = block.rows.iter().map(|r| r.label.as_str()).collect();
        let expected: Vec<_> = Metric::ALL.iter().map(|m| m.label()).collect();
        assert_eq!(labels, expected);
        assert!(block.rows[0].result.delta > 0.0);
    }

    #[test]
    fn unpaired_participants_are_listed_or_dropped() {
        let mut c = corpus();
        c.push(trial("lonely", Task::Analytical, Condition::Ai, 0.3));
        match compare_overall(&c, false).unwrap_err() {
            HarnessError::UnpairedParticipant { participants } => assert_eq!(participants, vec!["lonely"]),
            e => panic!("{e:?}"),
        }
        let (_, dropped) = compare_overall(&c, true).unwrap();
        assert_eq!(dropped, vec!["lonely"]);
    }

    #[test]
    fn single_participant_is_degenerate() {
        let c = vec![
            trial("p", Task::Analytical, Condition::Ai, 0.3),
            trial("p", Task::Creative, Condition::NoAi, 0.1),
        ];
        assert!(matches!(
            compare_overall(&c, false),
            Err(HarnessError::Stats(StatsError::DegenerateSample(_)))
        ));
    }

    #[test]
    fn swapping_conditions_negates_delta_and_t() {
        let c = corpus();
        let swapped: Vec<ScoredTrial> = c
            .iter()
            .cloned()
            .map(|mut s| {
                s.record.condition = s.record.condition.flipped();
                s
            })
            .collect();
        let (a, _) = compare_overall(&c, false).unwrap();
        let (b, _) = compare_overall(&swapped, false).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert!((x.result.delta + y.result.delta).abs() < 1e-12);
            assert!((x.result.t + y.result.t).abs() < 1e-9);
            assert!((x.result.p - y.result.p).abs() < 1e-12);
        }
        for task in Task::ALL {
            let a = compare_within_task(&c, task, Variance::Pooled).unwrap();
            let b = compare_within_task(&swapped, task, Variance::Pooled).unwrap();
            for (x, y) in a.rows.iter().zip(&b.rows) {
                assert!((x.result.delta + y.result.delta).abs() < 1e-12);
                assert!((x.result.p - y.result.p).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tlx_time_blocks_and_missing_fields() {
        let records: Vec<TrialRecord> = corpus().into_iter().map(|s| s.record).collect();
        let blocks = compare_tlx_time(&records, Task::Analytical, Variance::Pooled).unwrap();
        assert_eq!(blocks[0].rows.len(), 7);
        assert_eq!(blocks[0].rows[6].label, "TLX total");
        assert_eq!(blocks[1].rows[0].label, "Completion time (min)");

        let mut missing = records.clone();
        missing[1].completion_min = None;
        let task = missing[1].task;
        match compare_tlx_time(&missing, task, Variance::Pooled).unwrap_err() {
            HarnessError::MissingField { field, trials } => {
                assert_eq!(field, "completion_min");
                assert_eq!(trials.len(), 1);
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn analyze_collects_all_blocks() {
        let report = analyze(&corpus(), 0, AnalysisOptions::default()).unwrap();
        assert_eq!(report.blocks.len(), 1 + 2 + 2 + 2);
        assert_eq!(report.summary.trials, 12);
        assert_eq!(report.summary.participants, 6);
        assert!(report.notes.is_empty());
    }
}
