//! Two-sided Student t-tests, Cohen's d / d_z, and the t distribution CDF.
//!
//! The CDF goes through the regularized incomplete beta function,
//! `P(|T| > t) = I_x(df/2, 1/2)` with `x = df / (df + t^2)`, evaluated by
//! Lentz's continued fraction.

use serde::{Deserialize, Serialize};

/// Two-sided significance level.
pub const ALPHA: f64 = 0.05;

/// Number of NASA-TLX items.
pub const TLX_ITEMS: usize = 6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps the series in its accurate range.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;
const CF_MAX_ITER: usize = 2_000;

/// Continued-fraction part of `I_x(a, b)` (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// `I_x(a, b)` given both `x` and `y = 1 - x`, so callers can supply a `y`
/// computed without cancellation.
fn reg_inc_beta_xy(a: f64, b: f64, x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if y <= 0.0 {
        return 1.0;
    }
    let ln_front = a * x.ln() + b * y.ln() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_cf(a, b, x) / a
    } else {
        1.0 - ln_front.exp() * beta_cf(b, a, y) / b
    }
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> Result<f64, StatsError> {
    if !(a > 0.0 && b > 0.0) {
        return Err(StatsError::Domain(format!("shape parameters must be positive, got a={a}, b={b}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(StatsError::Domain(format!("x must lie in [0, 1], got {x}")));
    }
    Ok(reg_inc_beta_xy(a, b, x, 1.0 - x).clamp(0.0, 1.0))
}

fn check_df(df: f64) -> Result<(), StatsError> {
    if df > 0.0 && df.is_finite() {
        Ok(())
    } else {
        Err(StatsError::Domain(format!("degrees of freedom must be positive, got {df}")))
    }
}

/// `P(|T| >= |t|)` for Student's t with `df` degrees of freedom.
pub fn t_two_sided_p(t: f64, df: f64) -> Result<f64, StatsError> {
    check_df(df)?;
    if t.is_nan() {
        return Err(StatsError::Domain("t is NaN".into()));
    }
    if t.is_infinite() {
        return Ok(0.0);
    }
    let t2 = t * t;
    let x = df / (df + t2);
    let y = t2 / (df + t2);
    Ok(reg_inc_beta_xy(df / 2.0, 0.5, x, y).clamp(0.0, 1.0))
}

/// Cumulative distribution function of Student's t.
pub fn t_cdf(t: f64, df: f64) -> Result<f64, StatsError> {
    let tail = t_two_sided_p(t, df)? / 2.0;
    Ok(if t >= 0.0 { 1.0 - tail } else { tail })
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance with the n-1 denominator.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

pub fn sample_sd(xs: &[f64]) -> f64 {
    sample_variance(xs).sqrt()
}

fn is_constant(xs: &[f64]) -> bool {
    xs.iter().all(|x| *x == xs[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Descriptives {
    pub n: usize,
    pub mean: f64,
    /// Sample SD (n-1); NaN when n < 2.
    pub sd: f64,
}

impl Descriptives {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len();
        Descriptives {
            n,
            mean: if n == 0 { f64::NAN } else { mean(xs) },
            sd: if n < 2 { f64::NAN } else { sample_sd(xs) },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variance {
    /// Classic equal-variance test, `df = n_a + n_b - 2`.
    Pooled,
    /// Welch's test with Welch-Satterthwaite df.
    Welch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectKind {
    /// Paired design: mean difference over SD of differences.
    Dz,
    /// Independent groups: mean difference over pooled SD.
    D,
}

/// Test statistic, degrees of freedom, two-sided p and effect size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub t: f64,
    pub df: f64,
    pub p: f64,
    pub effect: f64,
}

/// One-sample t-test of paired differences against zero.
pub fn paired_t(diffs: &[f64]) -> Result<TestOutcome, StatsError> {
    let n = diffs.len();
    if n < 2 {
        return Err(StatsError::DegenerateSample(format!(
            "paired test needs at least 2 differences, got {n}"
        )));
    }
    if is_constant(diffs) {
        return Err(StatsError::DegenerateSample(
            "all paired differences are equal".into(),
        ));
    }
    let m = mean(diffs);
    let sd = sample_sd(diffs);
    let t = m / (sd / (n as f64).sqrt());
    let df = (n - 1) as f64;
    Ok(TestOutcome {
        t,
        df,
        p: t_two_sided_p(t, df)?,
        effect: m / sd,
    })
}

/// Two-sample t-test of `group_b - group_a`. Cohen's d always uses the
/// pooled SD, whichever variance assumption the test makes.
pub fn independent_t(
    group_a: &[f64],
    group_b: &[f64],
    variance: Variance,
) -> Result<TestOutcome, StatsError> {
    let (na, nb) = (group_a.len(), group_b.len());
    if na < 2 || nb < 2 {
        return Err(StatsError::DegenerateSample(format!(
            "each group needs at least 2 values, got {na} and {nb}"
        )));
    }
    if is_constant(group_a) && is_constant(group_b) {
        return Err(StatsError::DegenerateSample("pooled variance is zero".into()));
    }
    let (fa, fb) = (na as f64, nb as f64);
    let (ma, mb) = (mean(group_a), mean(group_b));
    let (va, vb) = (sample_variance(group_a), sample_variance(group_b));
    let pooled_var = ((fa - 1.0) * va + (fb - 1.0) * vb) / (fa + fb - 2.0);
    let diff = mb - ma;
    let (t, df) = match variance {
        Variance::Pooled => (
            diff / (pooled_var * (1.0 / fa + 1.0 / fb)).sqrt(),
            fa + fb - 2.0,
        ),
        Variance::Welch => {
            let (sa, sb) = (va / fa, vb / fb);
            let df = (sa + sb).powi(2) / (sa * sa / (fa - 1.0) + sb * sb / (fb - 1.0));
            (diff / (sa + sb).sqrt(), df)
        }
    };
    Ok(TestOutcome {
        t,
        df,
        p: t_two_sided_p(t, df)?,
        effect: diff / pooled_var.sqrt(),
    })
}

/// A full AI vs no-AI comparison row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatResult {
    pub no_ai: Descriptives,
    pub ai: Descriptives,
    /// `ai.mean - no_ai.mean`.
    pub delta: f64,
    pub t: f64,
    pub df: f64,
    pub p: f64,
    pub effect: f64,
    pub effect_kind: EffectKind,
    pub significant: bool,
}

impl StatResult {
    fn assemble(no_ai: &[f64], ai: &[f64], outcome: TestOutcome, effect_kind: EffectKind) -> Self {
        let no_ai = Descriptives::of(no_ai);
        let ai = Descriptives::of(ai);
        StatResult {
            no_ai,
            ai,
            delta: ai.mean - no_ai.mean,
            t: outcome.t,
            df: outcome.df,
            p: outcome.p,
            effect: outcome.effect,
            effect_kind,
            significant: outcome.p < ALPHA,
        }
    }

    /// Paired comparison; `no_ai[i]` and `ai[i]` belong to the same participant.
    pub fn paired(no_ai: &[f64], ai: &[f64]) -> Result<Self, StatsError> {
        if no_ai.len() != ai.len() {
            return Err(StatsError::Arity {
                expected: no_ai.len(),
                got: ai.len(),
            });
        }
        let diffs: Vec<f64> = ai.iter().zip(no_ai).map(|(a, b)| a - b).collect();
        let outcome = paired_t(&diffs)?;
        Ok(Self::assemble(no_ai, ai, outcome, EffectKind::Dz))
    }

    pub fn independent(no_ai: &[f64], ai: &[f64], variance: Variance) -> Result<Self, StatsError> {
        let outcome = independent_t(no_ai, ai, variance)?;
        Ok(Self::assemble(no_ai, ai, outcome, EffectKind::D))
    }

    /// Builds a row from already-summarized values (e.g. printed tables).
    pub fn from_summary(
        no_ai: Descriptives,
        ai: Descriptives,
        p: f64,
        effect: f64,
        effect_kind: EffectKind,
    ) -> Self {
        StatResult {
            no_ai,
            ai,
            delta: ai.mean - no_ai.mean,
            t: f64::NAN,
            df: f64::NAN,
            p,
            effect,
            effect_kind,
            significant: p < ALPHA,
        }
    }
}

/// Unweighted mean of the six TLX item ratings. Scale-agnostic.
pub fn tlx_total(items: &[f64]) -> Result<f64, StatsError> {
    if items.len() != TLX_ITEMS {
        return Err(StatsError::Arity {
            expected: TLX_ITEMS,
            got: items.len(),
        });
    }
    Ok(mean(items))
}
