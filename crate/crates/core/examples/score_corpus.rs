//! Ingest the bundled demo corpus, score every trial and print the tables.

use adoptscope::harness::{self, tasks, AnalysisOptions, ReportFormat};
use adoptscope::{Analyzer, HashEmbedder};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let records = harness::ingest_csv(tasks::DEMO_CORPUS_CSV.as_bytes())?;
    let run = harness::score_corpus(&records, &Analyzer::shared(), &HashEmbedder);
    for t in &run.scored {
        println!(
            "{} {:<10} {:<5} jaccard {:.3} pos {:.3} emb {:.3} sent {:.3}",
            t.record.participant_id,
            t.record.task,
            t.record.condition,
            t.metrics.jaccard,
            t.metrics.pos_tf_isf_cosine,
            t.metrics.embedding_cosine,
            t.metrics.sentiment_match,
        );
    }
    let report = harness::analyze(&run.scored, run.failures.len(), AnalysisOptions::default())?;
    print!("\n{}", harness::render_report(&report, ReportFormat::Markdown));
    Ok(())
}
