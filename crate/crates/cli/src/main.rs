use std::io::Write;
use std::process::ExitCode;

use bispan_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = std::env::var("BISPAN_SEED").ok();
    let outcome = run(&cli, seed.as_deref());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
