//! Built-in numerical and fixture checks, run by `adoptscope selftest`.

use crate::analyzer::Analyzer;
use crate::embedding::HashEmbedder;
use crate::harness::tasks;
use crate::harness::Task;
use crate::stats::{independent_t, paired_t, t_cdf, tlx_total, Variance};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

/// Student t density with its constant from the exact recursion
/// Γ(ν/2)/Γ((ν+1)/2), valid for integer ν.
fn t_density(x: f64, nu: u32) -> f64 {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let (mut ratio, mut k) = if nu % 2 == 1 { (sqrt_pi, 1) } else { (2.0 / sqrt_pi, 2) };
    while k < nu {
        ratio *= k as f64 / (k as f64 + 1.0);
        k += 2;
    }
    let v = nu as f64;
    (1.0 + x * x / v).powf(-(v + 1.0) / 2.0) / ((v * std::f64::consts::PI).sqrt() * ratio)
}

/// Composite Simpson on [0, |t|] with a fixed fine grid.
fn quadrature_cdf(t: f64, nu: u32) -> f64 {
    let n = 20_000;
    let h = t.abs() / n as f64;
    let mut sum = t_density(0.0, nu) + t_density(t.abs(), nu);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * t_density(i as f64 * h, nu);
    }
    let mass = sum * h / 3.0;
    if t >= 0.0 {
        0.5 + mass
    } else {
        0.5 - mass
    }
}

pub fn run() -> Vec<Check> {
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    for nu in [1u32, 2, 5, 10, 30, 100] {
        for k in 0..=32 {
            let t = -8.0 + 0.5 * k as f64;
            let err = (t_cdf(t, nu as f64).unwrap_or(f64::NAN) - quadrature_cdf(t, nu)).abs();
            worst = worst.max(if err.is_nan() { f64::INFINITY } else { err });
        }
    }
    out.push(check("t_cdf vs quadrature (df 1..100, |t| <= 8)", worst < 1e-8, format!("max error {worst:.2e}")));

    let paired = paired_t(&[1.0, 2.0, 3.0, 4.0, 5.0]);
    out.push(match paired {
        Ok(r) => check(
            "paired t on 1..5 (n-1 SD)",
            (r.t - 4.242_640_687).abs() < 1e-6 && (r.p - 0.013_235_6).abs() < 1e-6,
            format!("t={:.4} p={:.6} d_z={:.4}", r.t, r.p, r.effect),
        ),
        Err(e) => check("paired t on 1..5 (n-1 SD)", false, e.to_string()),
    });
    out.push(match independent_t(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], Variance::Pooled) {
        Ok(r) => check(
            "independent t, [1,2,3] vs [4,5,6]",
            (r.t - 3.674).abs() < 1e-3 && (r.p - 0.0213).abs() < 5e-4 && (r.effect - 3.0).abs() < 1e-9,
            format!("t={:.4} p={:.6} d={:.4}", r.t, r.p, r.effect),
        ),
        Err(e) => check("independent t, [1,2,3] vs [4,5,6]", false, e.to_string()),
    });

    let tlx = [
        ([5.043, 2.435, 2.652, 3.478, 5.087, 2.957], 3.609),
        ([4.667, 2.917, 2.250, 3.458, 4.792, 2.208], 3.382),
        ([5.250, 3.458, 2.292, 3.500, 4.917, 2.500], 3.653),
        ([5.609, 2.783, 3.130, 3.522, 5.739, 2.913], 3.949),
    ];
    let totals: Vec<f64> = tlx.iter().map(|(items, _)| tlx_total(items).unwrap_or(f64::NAN)).collect();
    let ok = tlx.iter().zip(&totals).all(|((_, want), got)| (got - want).abs() <= 1e-3);
    out.push(check(
        "TLX totals from item means",
        ok,
        totals.iter().map(|t| format!("{t:.3}")).collect::<Vec<_>>().join(" "),
    ));

    let analyzer = Analyzer::shared();
    for task in Task::ALL {
        let text = tasks::suggestion(task);
        let name = match task {
            Task::Analytical => "identity on analytical suggestion",
            Task::Creative => "identity on creative suggestion",
        };
        out.push(match analyzer.score_texts(text, text, &HashEmbedder) {
            Ok(v) => check(
                name,
                v.jaccard == 1.0
                    && (v.pos_tf_isf_cosine - 1.0).abs() < 1e-9
                    && (v.embedding_cosine - 1.0).abs() < 1e-9,
                format!(
                    "jaccard={:.3} pos={:.3} emb={:.3} sent={:.3}",
                    v.jaccard, v.pos_tf_isf_cosine, v.embedding_cosine, v.sentiment_match
                ),
            ),
            Err(e) => check(name, false, e.to_string()),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for c in super::run() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
