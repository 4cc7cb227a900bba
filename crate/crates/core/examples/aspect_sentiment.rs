//! Per-aspect polarity and the sentiment match between two texts.

use adoptscope::metrics::{aspect_polarities, SentimentLabel};
use adoptscope::Analyzer;

fn main() {
    let analyzer = Analyzer::shared();
    let response = "The schedule is flexible. The commute is not pleasant. Teams feel isolated.";
    let suggestion = "A flexible schedule is a real benefit. Isolation hurts teams. The commute is awful.";

    for sentence in ["This is good.", "This is not good.", "This is very good."] {
        println!("{sentence:<22} polarity {:+.3}", analyzer.sentence_polarity(sentence));
    }

    let threshold = analyzer.sentiment_config.neutral_threshold;
    for (name, text) in [("response", response), ("suggestion", suggestion)] {
        println!("{name}:");
        let doc = analyzer.document(text);
        for (aspect, p) in aspect_polarities(&doc, &analyzer.sentiment) {
            println!("  {aspect:<12} {p:+.3} {:?}", SentimentLabel::from_polarity(p, threshold));
        }
    }
    let m = analyzer.aspect_sentiment_match(&analyzer.document(response), &analyzer.document(suggestion));
    println!("sentiment match = {m:.3}");
}
