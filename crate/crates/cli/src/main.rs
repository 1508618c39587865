mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

const INPUT_ERROR: u8 = 3;

fn run(cli: &Cli) -> anyhow::Result<commands::Outcome> {
    match &cli.command {
        Command::Check(a) => commands::check(a),
        Command::Classify(a) => commands::classify(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Stress(a) => commands::stress(a),
        Command::Scan(a) => commands::scan(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.output.as_bytes()).is_err() {
                return ExitCode::from(INPUT_ERROR);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
