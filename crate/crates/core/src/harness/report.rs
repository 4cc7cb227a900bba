//! Markdown and CSV rendering of an [`AnalysisReport`].
//!
//! Numbers use three decimals with round-half-even on the exact binary
//! value. Rows with p < .05 get a `*` on p; markdown also bolds the label.

use std::fmt::Write as _;
use std::str::FromStr;

use super::compare::{AnalysisReport, ComparisonBlock, Design, Row};
use crate::stats::EffectKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Markdown,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown report format {other:?}")),
        }
    }
}

/// Three decimals, ties to even, never `-0.000`; NaN renders as `NA`.
pub fn fmt3(x: f64) -> String {
    if x.is_nan() {
        return "NA".into();
    }
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

pub const CSV_HEADER: [&str; 17] = [
    "block", "task", "label", "design", "n_no_ai", "m_no_ai", "sd_no_ai", "n_ai", "m_ai", "sd_ai",
    "delta", "t", "df", "p", "effect", "effect_kind", "significant",
];

pub fn render_report(report: &AnalysisReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Markdown => render_markdown(report),
        ReportFormat::Csv => render_csv(report),
    }
}

fn effect_header(block: &ComparisonBlock) -> &'static str {
    match block.design {
        Design::Paired => "d_z",
        Design::Independent => "Cohen's d",
    }
}

fn p_cell(row: &Row) -> String {
    let p = fmt3(row.result.p);
    if row.result.significant {
        format!("{p}*")
    } else {
        p
    }
}

fn m_sd(mean: f64, sd: f64) -> String {
    format!("{} ({})", fmt3(mean), fmt3(sd))
}

pub fn render_markdown(report: &AnalysisReport) -> String {
    let mut out = String::from("# Adoption analysis\n");
    let s = &report.summary;
    if s.trials > 0 || s.failed > 0 {
        let _ = write!(
            out,
            "\nTrials: {} from {} participants (analytical {}, creative {}; AI {}, NO_AI {}). Failed to score: {}.\n",
            s.trials, s.participants, s.analytical, s.creative, s.ai, s.no_ai, s.failed
        );
    }
    for block in &report.blocks {
        let _ = write!(
            out,
            "\n## {}\n\n| Metric | No-AI M (SD) | AI M (SD) | Δ | p | {} |\n|---|---:|---:|---:|---:|---:|\n",
            block.title,
            effect_header(block)
        );
        for row in &block.rows {
            let r = &row.result;
            let label = if r.significant {
                format!("**{}**", row.label)
            } else {
                row.label.clone()
            };
            let _ = writeln!(
                out,
                "| {label} | {} | {} | {} | {} | {} |",
                m_sd(r.no_ai.mean, r.no_ai.sd),
                m_sd(r.ai.mean, r.ai.sd),
                fmt3(r.delta),
                p_cell(row),
                fmt3(r.effect)
            );
        }
    }
    if !report.notes.is_empty() {
        out.push_str("\n## Notes\n\n");
        for note in &report.notes {
            let _ = writeln!(out, "- {note}");
        }
    }
    out
}

pub fn render_csv(report: &AnalysisReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for block in &report.blocks {
        for row in &block.rows {
            let r = &row.result;
            let kind = match r.effect_kind {
                EffectKind::Dz => "d_z",
                EffectKind::D => "d",
            };
            let design = match block.design {
                Design::Paired => "paired",
                Design::Independent => "independent",
            };
            w.write_record([
                block.title.as_str(),
                block.task.map_or("", |t| t.as_str()),
                row.label.as_str(),
                design,
                &r.no_ai.n.to_string(),
                &fmt3(r.no_ai.mean),
                &fmt3(r.no_ai.sd),
                &r.ai.n.to_string(),
                &fmt3(r.ai.mean),
                &fmt3(r.ai.sd),
                &fmt3(r.delta),
                &fmt3(r.t),
                &fmt3(r.df),
                &fmt3(r.p),
                &fmt3(r.effect),
                kind,
                if r.significant { "*" } else { "" },
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{Descriptives, StatResult};

    fn d(mean: f64, sd: f64) -> Descriptives {
        Descriptives { n: 47, mean, sd }
    }

    fn jaccard_row() -> AnalysisReport {
        AnalysisReport {
            blocks: vec![ComparisonBlock {
                title: "Overall".into(),
                design: Design::Paired,
                task: None,
                rows: vec![Row {
                    label: "Jaccard".into(),
                    result: StatResult::from_summary(d(0.093, 0.031), d(0.108, 0.038), 0.0496, 0.294, EffectKind::Dz),
                }],
            }],
            ..Default::default()
        }
    }

    #[test]
    fn rounding_is_half_even_on_exact_ties() {
        assert_eq!(fmt3(0.0625), "0.062");
        assert_eq!(fmt3(0.0635), "0.064");
        assert_eq!(fmt3(-0.0001), "0.000");
        assert_eq!(fmt3(f64::NAN), "NA");
        assert_eq!(fmt3(3.0), "3.000");
    }

    #[test]
    fn markdown_row_shows_delta_and_star() {
        let md = render_markdown(&jaccard_row());
        assert!(md.contains("| **Jaccard** | 0.093 (0.031) | 0.108 (0.038) | 0.015 | 0.050* | 0.294 |"), "{md}");
        assert!(md.contains("| d_z |"));
    }

    #[test]
    fn empty_report_is_header_only() {
        let empty = AnalysisReport::default();
        assert_eq!(render_markdown(&empty), "# Adoption analysis\n");
        assert_eq!(render_csv(&empty), format!("{}\n", CSV_HEADER.join(",")));
    }

    #[test]
    fn csv_and_markdown_agree() {
        let report = jaccard_row();
        let csv = render_csv(&report);
        let line = csv.lines().nth(1).unwrap();
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(&cols[5..7], ["0.093", "0.031"]);
        assert_eq!(&cols[8..11], ["0.108", "0.038", "0.015"]);
        assert_eq!(cols[13], "0.050");
        assert_eq!(cols[16], "*");
    }
}
