mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format, RunConfig};
use commands::Exit;

fn run(cli: Cli) -> gww_core::Result<Exit> {
    match cli.command {
        Command::Logdet(a) => commands::logdet(&RunConfig::from_args(&a, Format::Json)?),
        Command::Predict(a) => commands::predict(&RunConfig::from_args(&a, Format::Csv)?),
        Command::Verify(a) => commands::verify(&RunConfig::from_args(&a, Format::Json)?),
        Command::Sweep(a) => commands::sweep(&RunConfig::from_args(&a, Format::Csv)?),
        Command::Constants(a) => commands::constants(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(Exit::ConfigError as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let code = match run(cli) {
        Ok(exit) => exit,
        Err(e) => {
            eprintln!("error: {e}");
            Exit::of_error(&e)
        }
    };
    ExitCode::from(code as u8)
}
