use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ptight_cli::Cli;

fn main() -> ExitCode {
    let out = ptight_cli::run(Cli::parse());
    // A closed pipe is not worth a panic.
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
