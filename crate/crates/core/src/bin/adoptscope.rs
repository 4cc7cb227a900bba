use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    adoptscope::cli::init_tracing();
    adoptscope::cli::run(adoptscope::cli::Cli::parse())
}
