//! Jaccard overlap between a response and a suggestion.
//!
//! cargo run --example lexical_overlap -- "first text" "second text"

use adoptscope::metrics::jaccard;
use adoptscope::Analyzer;

fn main() {
    let mut args = std::env::args().skip(1);
    let a = args
        .next()
        .unwrap_or_else(|| "Remote work improves focus for many people.".into());
    let b = args
        .next()
        .unwrap_or_else(|| "Many people find that remote work improves their focus.".into());

    let analyzer = Analyzer::shared();
    let (da, db) = (analyzer.document(&a), analyzer.document(&b));
    let left: std::collections::BTreeSet<_> = da.tokens.iter().collect();
    let right: std::collections::BTreeSet<_> = db.tokens.iter().collect();

    println!("shared:  {:?}", left.intersection(&right).collect::<Vec<_>>());
    println!("only a:  {:?}", left.difference(&right).collect::<Vec<_>>());
    println!("only b:  {:?}", right.difference(&left).collect::<Vec<_>>());
    println!("jaccard: {:.4}", jaccard(&da, &db));
}
