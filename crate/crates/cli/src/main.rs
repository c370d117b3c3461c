//! `s2re`: solve, sweep and verify relative equilibria of three bodies on a
//! sphere.
//!
//! Exit codes: 0 success, 2 no solution or failed verification, 1 usage or
//! domain error.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::ExitCode;

use clap::Parser;

mod commands;
mod config;
mod records;

use commands::Status;
use config::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(Status::Solved) => ExitCode::SUCCESS,
        Ok(Status::NoSolution | Status::VerificationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
