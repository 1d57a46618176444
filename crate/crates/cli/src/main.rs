//! `permsep` command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

mod cli;
mod commands;
mod output;
mod svg;

use clap::error::ErrorKind;
use clap::Parser;

use crate::cli::{Cli, Command};

/// Die quietly on a closed pipe (`permsep bench | head`) instead of
/// panicking mid-print.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() {
    reset_sigpipe();
    let parsed = match Cli::try_parse() {
        Ok(parsed) => parsed,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };

    let result = match &parsed.command {
        Command::Bench(args) => commands::run_bench(&parsed, args),
        Command::Train(args) => commands::run_train(&parsed, args),
        Command::Compare(args) => commands::run_compare(&parsed, args),
        Command::Eval(args) => commands::run_eval(&parsed, args),
        Command::Assign(args) => commands::run_assign(&parsed, args),
    };

    if let Err(err) = result {
        eprintln!("error: {}", err.message());
        std::process::exit(err.exit_code());
    }
}
