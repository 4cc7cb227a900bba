//! Metric values checked against independently computed oracles.

mod common;

use adoptscope::metrics::{jaccard_tokens, pos_tf_isf_cosine};
use adoptscope::Analyzer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{assert_table, naive_jaccard, oracle_cosine, TF_ISF_FIXTURES};

#[test]
fn tf_isf_matches_hand_term_tables() {
    let analyzer = Analyzer::shared();
    for (a, ta, b, tb) in TF_ISF_FIXTURES {
        assert_table(&analyzer, a, ta);
        assert_table(&analyzer, b, tb);
        let got = pos_tf_isf_cosine(&analyzer.document(a), &analyzer.document(b));
        let want = oracle_cosine(ta, tb);
        assert!((got - want).abs() < 1e-9, "{a} | {b}: {got} vs {want}");
    }
}

#[test]
fn tf_isf_closed_form_for_the_cats_pair() {
    // a: cat 2·1, run and sleep 1·(1 + ln 1.5); b: three unit weights.
    let w = 1.0 + 1.5f64.ln();
    let want = (2.0 + w) / ((4.0 + 2.0 * w * w).sqrt() * 3.0f64.sqrt());
    let analyzer = Analyzer::shared();
    let got = pos_tf_isf_cosine(&analyzer.document("cats run. cats sleep."), &analyzer.document("a cat runs."));
    assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    assert!((got - 0.697_291).abs() < 1e-6);
}

#[test]
fn jaccard_equals_naive_membership_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let vocab: Vec<String> = (0..40).map(|i| format!("w{i}")).collect();
    let draw = |rng: &mut ChaCha8Rng| -> Vec<String> {
        let len = rng.random_range(0..30);
        (0..len).map(|_| vocab[rng.random_range(0..vocab.len())].clone()).collect()
    };
    for _ in 0..200 {
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        assert_eq!(jaccard_tokens(&a, &b), naive_jaccard(&a, &b), "{a:?} {b:?}");
    }
}

#[test]
fn jaccard_hand_examples() {
    let analyzer = Analyzer::shared();
    let v = |a: &str, b: &str| adoptscope::metrics::jaccard(&analyzer.document(a), &analyzer.document(b));
    assert!((v("the cat", "the dog") - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(v("", ""), 0.0);
    assert_eq!(v("red fox", "blue whale"), 0.0);
}

#[test]
fn aspect_match_counts_one_positive_shared_aspect_of_five() {
    // Aspects: a {garden, house, roof}, b {garden, fence, gate}. Only
    // garden is shared, and it reads positive on both sides.
    let analyzer = Analyzer::shared();
    let a = analyzer.document("The garden is beautiful. The house has a roof.");
    let b = analyzer.document("The garden looks beautiful. A fence stands near the gate.");
    let m = analyzer.aspect_sentiment_match(&a, &b);
    assert!((m - 0.2).abs() < 1e-12, "{m}");
}

#[test]
fn sentence_polarity_examples() {
    let analyzer = Analyzer::shared();
    assert_eq!(analyzer.sentence_polarity("the table stands"), 0.0);
    let great = analyzer.sentence_polarity("great");
    assert!(great > 0.1);
    assert!((analyzer.sentence_polarity("not great") - great * -0.5).abs() < 1e-12);
}
