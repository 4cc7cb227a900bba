use std::collections::HashSet;

use crate::text::Document;

/// Unique shared tokens over unique tokens in either text; 0 when both are empty.
pub fn jaccard(a: &Document, b: &Document) -> f64 {
    jaccard_tokens(&a.tokens, &b.tokens)
}

pub fn jaccard_tokens<S: AsRef<str>>(a: &[S], b: &[S]) -> f64 {
    let sa: HashSet<&str> = a.iter().map(AsRef::as_ref).collect();
    let sb: HashSet<&str> = b.iter().map(AsRef::as_ref).collect();
    let union = sa.union(&sb).count();
    if union == 0 {
        return 0.0;
    }
    sa.intersection(&sb).count() as f64 / union as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!((jaccard_tokens(&["the", "cat"], &["the", "dog"]) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(jaccard_tokens(&["a", "b", "b"], &["b", "a"]), 1.0);
        assert_eq!(jaccard_tokens(&["a"], &["b"]), 0.0);
        assert_eq!(jaccard_tokens::<&str>(&[], &[]), 0.0);
        assert_eq!(jaccard_tokens(&["a"], &[]), 0.0);
    }
}
