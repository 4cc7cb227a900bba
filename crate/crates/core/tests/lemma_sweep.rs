//! Every inflected form the shipped lexicon was built from lemmatizes back to
//! its base.

use adoptscope::text::Lemmatizer;
use adoptscope::PosClass;

fn sweep(fixture: &str, class: PosClass) -> Vec<String> {
    let lem = Lemmatizer::builtin();
    fixture
        .lines()
        .filter_map(|l| l.split_once('\t'))
        .filter_map(|(form, base)| {
            let got = lem.lemmatize(form, class);
            (got != base).then(|| format!("{form}\t{base}\t(got {got})"))
        })
        .collect()
}

#[test]
fn verb_forms_recover_base() {
    let misses = sweep(include_str!("fixtures/verb_forms.tsv"), PosClass::Verb);
    assert!(misses.is_empty(), "{} misses:\n{}", misses.len(), misses.join("\n"));
}

#[test]
fn noun_forms_recover_base() {
    let misses = sweep(include_str!("fixtures/noun_forms.tsv"), PosClass::Noun);
    assert!(misses.is_empty(), "{} misses:\n{}", misses.len(), misses.join("\n"));
}
