//! Tag two texts and compare them by TF-ISF weighted `lemma/CLASS` terms.
//!
//! Prints the term table for each side so the weights can be checked by hand.

use adoptscope::metrics::{pos_tf_isf_cosine, TfIsfVector};
use adoptscope::Analyzer;

fn show(label: &str, doc: &adoptscope::Document) {
    let v = TfIsfVector::from_document(doc);
    println!("{label}: {} sentence(s)", v.sentence_count);
    for (i, token) in doc.tokens.iter().enumerate() {
        print!("{token}/{} ", doc.tags[i].as_str());
    }
    println!();
    for (term, w) in &v.weights {
        println!(
            "  {term:<20} tf={} sf={} w={w:.4}",
            v.term_counts[term], v.sentence_freq[term]
        );
    }
}

fn main() {
    let analyzer = Analyzer::shared();
    let a = analyzer.document("Cats run. Cats sleep.");
    let b = analyzer.document("A cat runs.");
    show("a", &a);
    show("b", &b);
    println!("cosine = {:.6}", pos_tf_isf_cosine(&a, &b));
}
