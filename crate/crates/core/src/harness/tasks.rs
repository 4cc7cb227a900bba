//! The two study tasks: prompts and the fixed AI suggestions.

use super::record::Task;

pub const ANALYTICAL_PROMPT: &str = include_str!("../../data/tasks/analytical_prompt.txt");
pub const ANALYTICAL_SUGGESTION: &str = include_str!("../../data/tasks/analytical_suggestion.txt");
pub const CREATIVE_PROMPT: &str = include_str!("../../data/tasks/creative_prompt.txt");
pub const CREATIVE_SUGGESTION: &str = include_str!("../../data/tasks/creative_suggestion.txt");

/// Four participants, both tasks each, counterbalanced; CSV.
pub const DEMO_CORPUS_CSV: &str = include_str!("../../data/demo_corpus.csv");

pub fn prompt(task: Task) -> &'static str {
    match task {
        Task::Analytical => ANALYTICAL_PROMPT.trim_end(),
        Task::Creative => CREATIVE_PROMPT.trim_end(),
    }
}

pub fn suggestion(task: Task) -> &'static str {
    match task {
        Task::Analytical => ANALYTICAL_SUGGESTION.trim_end(),
        Task::Creative => CREATIVE_SUGGESTION.trim_end(),
    }
}
