//! Score a response against each built-in task suggestion on all four axes.
//!
//! cargo run --example metric_vector -- [response.txt]

use adoptscope::harness::{tasks, Task};
use adoptscope::{Analyzer, HashEmbedder, Metric};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let response = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => "Remote work gives employees flexibility and saves commuting time, \
                 but it can weaken collaboration and leave people isolated. A hybrid \
                 arrangement balances productivity with team cohesion."
            .to_string(),
    };
    let analyzer = Analyzer::shared();
    for task in Task::ALL {
        let v = analyzer.score_texts(&response, tasks::suggestion(task), &HashEmbedder)?;
        println!("{task}:");
        for metric in Metric::ALL {
            println!("  {:<24} {:.3}", metric.label(), v.get(metric));
        }
    }
    Ok(())
}
