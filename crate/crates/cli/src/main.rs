//! `overheadnn` command-line entry point.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{load_file_config, Cli, Command, RunConfig};
use commands::{cmd_evaluate, cmd_predict, cmd_sweep, cmd_synth, cmd_train, cmd_validate};

fn main() -> ExitCode {
    let cli = Cli::parse();

    let file = match load_file_config(cli.config.as_deref()) {
        Ok(file) => file,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    let config = RunConfig::resolve(cli.globals, file);

    let result = match &cli.command {
        Command::Validate => cmd_validate(&config),
        Command::Synth { n, seed, noise_sd } => cmd_synth(&config, *n, *seed, *noise_sd),
        Command::Sweep => cmd_sweep(&config),
        Command::Train { topology } => cmd_train(&config, topology),
        Command::Evaluate { pairs } => cmd_evaluate(&config, pairs.as_deref()),
        Command::Predict { values } => cmd_predict(&config, values),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}
