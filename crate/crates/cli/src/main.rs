//! Command-line front end for the `wehrlab` library: verifies entropic
//! uncertainty relations with Gaussian quantum memory, sweeps the
//! saturating state family, cross-checks the closed forms against a
//! Fock-space quadrature oracle, searches families for the smallest gap,
//! and prints Gaussian state diagnostics.
//!
//! Exit codes: `0` when every requested check passes, `2` when a check
//! fails (an inequality is violated or a cross-check exceeds tolerance),
//! `1` on usage or I/O errors.

mod commands;
mod report;

use clap::error::ErrorKind;
use clap::Parser;

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_CHECK_FAILED: i32 = 2;

fn main() {
    let cli = match commands::Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not errors. Genuine usage
            // errors exit 1: code 2 is reserved for failed checks, and
            // clap's default of 2 would conflate the two.
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let code = match commands::run(cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(err) => {
            eprintln!("error: {err:#}");
            EXIT_USAGE
        }
    };
    std::process::exit(code);
}
