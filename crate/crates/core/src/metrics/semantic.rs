use crate::embedding::{l2_normalize, EmbedError, EmbeddingProvider};
use crate::text::Document;

/// Cosine of two vectors after L2 normalization; 0 if either is all-zero.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    l2_normalize(&mut a);
    l2_normalize(&mut b);
    let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    dot.clamp(-1.0, 1.0)
}

pub fn embedding_cosine(
    a: &Document,
    b: &Document,
    provider: &dyn EmbeddingProvider,
) -> Result<f64, EmbedError> {
    let (va, vb) = provider.embed_pair(&a.raw, &b.raw)?;
    if va.len() != vb.len() {
        return Err(EmbedError::DimensionMismatch {
            expected: va.len(),
            actual: vb.len(),
        });
    }
    Ok(cosine(&va, &vb))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antipodal_and_zero() {
        let v = [0.3, -1.2, 4.0];
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        assert!((cosine(&v, &neg) + 1.0).abs() < 1e-12);
        assert!((cosine(&v, &v) - 1.0).abs() < 1e-12);
        assert_eq!(cosine(&v, &[0.0; 3]), 0.0);
    }
}
