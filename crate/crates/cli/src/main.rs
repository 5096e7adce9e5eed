mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::FAILURE } else { commands::OK });
        }
    };
    let outcome = match &cli.command {
        Command::Validate { model } => commands::validate(model),
        Command::Analyze(a) => commands::analyze(a),
        Command::Eval(a) => commands::eval(a),
        Command::Catalog { action } => commands::catalog_cmd(action),
    };
    match outcome {
        Ok(o) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(o.stdout.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(o.status)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::FAILURE)
        }
    }
}
