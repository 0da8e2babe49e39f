//! `qnogo` command-line front end.
//!
//! Exit codes: 0 realizable / ok, 1 usage error, 2 impossible, 3 parse or
//! compile error, 4 I/O error.

mod args;
mod commands;
mod inputs;
mod report;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_IO: u8 = 4;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse(_) => commands::EXIT_PARSE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let (outcome, common) = match &cli.command {
        Command::GateVerify(a) => (commands::gate_verify(a)?, &a.common),
        Command::Witness(a) => (commands::witness(a)?, &a.common),
        Command::CircleCheck(a) => (commands::circle_check(a)?, &a.common),
        Command::FidelitySweep(a) => (commands::fidelity_sweep(a)?, &a.common),
        Command::DslCheck(a) => (commands::dsl_check(a)?, &a.common),
    };
    let text = outcome.render(common.format)?;
    report::emit(&text, common.output.as_deref())?;
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // --help and --version are not errors.
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qnogo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
