use clap::Parser;
use wp_curvature::cli::{main_with, Cli};

fn main() -> std::process::ExitCode {
    std::process::ExitCode::from(main_with(&Cli::parse()))
}
