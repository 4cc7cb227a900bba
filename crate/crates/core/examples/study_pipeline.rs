//! Synthesize a corpus with a planted adoption rate, score it against the
//! task suggestions, and print the comparison tables.
//!
//! cargo run --example study_pipeline -- [participants] [adoption] [seed]

use adoptscope::harness::{self, AnalysisOptions, ReportFormat, SynthConfig};
use adoptscope::{Analyzer, HashEmbedder};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let config = SynthConfig {
        participants: args.next().map(|s| s.parse()).transpose()?.unwrap_or(40),
        adoption: args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.3),
        seed: args.next().map(|s| s.parse()).transpose()?.unwrap_or(7),
        ..SynthConfig::default()
    };
    let records = harness::synth_corpus(&config);
    let run = harness::score_corpus(&records, &Analyzer::shared(), &HashEmbedder);
    let report = harness::analyze(&run.scored, run.failures.len(), AnalysisOptions::default())?;
    print!("{}", harness::render_report(&report, ReportFormat::Markdown));
    Ok(())
}
