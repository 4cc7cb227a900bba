//! Paired and independent t-tests with effect sizes.

use adoptscope::stats::{independent_t, paired_t, t_two_sided_p, tlx_total, StatResult, Variance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let no_ai = [0.12, 0.08, 0.15, 0.10, 0.11, 0.09];
    let ai = [0.21, 0.19, 0.30, 0.17, 0.26, 0.22];

    let diffs: Vec<f64> = ai.iter().zip(&no_ai).map(|(a, b)| a - b).collect();
    let p = paired_t(&diffs)?;
    println!("paired:      t({}) = {:.3}, p = {:.5}, d_z = {:.3}", p.df, p.t, p.p, p.effect);

    for variance in [Variance::Pooled, Variance::Welch] {
        let r = independent_t(&no_ai, &ai, variance)?;
        println!("{variance:?}: t({:.2}) = {:.3}, p = {:.5}, d = {:.3}", r.df, r.t, r.p, r.effect);
    }

    let row = StatResult::paired(&no_ai, &ai)?;
    println!("row: delta {:.3}, significant {}", row.delta, row.significant);

    println!("p for t=2.0, df=10: {:.6}", t_two_sided_p(2.0, 10.0)?);
    println!("TLX total: {:.3}", tlx_total(&[5.0, 2.5, 2.7, 3.5, 5.1, 3.0])?);
    Ok(())
}
