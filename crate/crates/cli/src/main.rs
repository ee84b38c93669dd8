//! `betafluct`: command-line front end for the variance experiments.

mod commands;
mod grid;
mod output;

use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    ExitCode::from(commands::run(argv))
}
