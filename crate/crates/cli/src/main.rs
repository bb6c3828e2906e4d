use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod ingest;
mod output;
mod pipeline;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Entropy(a) => commands::entropy(a),
        Command::Synergy(a) => commands::synergy(a),
        Command::Fit(a) => commands::fit(a),
        Command::Cwt(a) => commands::cwt_cmd(a),
        Command::Adf(a) => commands::adf(a),
        Command::Coint(a) => commands::coint(a),
        Command::Pipeline(a) => pipeline::run(a),
        Command::Synth(a) => commands::synth(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
