//! Command-line front end: instance and solution files, the pipeline
//! commands, and byte-level simulation.

pub mod cli;
pub mod commands;
pub mod demo;
pub mod error;
pub mod execute;
pub mod instance;
pub mod output;
pub mod solution;

use clap::Parser;

use cli::{Cli, Command};
use error::{CliResult, Exit};

pub fn run(cli: &Cli) -> CliResult<Exit> {
    match &cli.command {
        Command::Closure(a) => commands::closure(a),
        Command::Overlay(a) => commands::overlay(a),
        Command::Retrieval(a) => commands::retrieval(a),
        Command::Solve(a) => commands::solve(a),
        Command::Pareto(a) => commands::pareto(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Demo(a) => demo::demo(a),
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Exit::Usage as i32 } else { Exit::Success as i32 };
        }
    };
    match run(&cli) {
        Ok(exit) => exit as i32,
        Err(e) => {
            eprintln!("ifropt: {e}");
            e.exit as i32
        }
    }
}
