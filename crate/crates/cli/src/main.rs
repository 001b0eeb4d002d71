use std::process::ExitCode;

use chowmot_cli::{render, run, Cli, RunConfig};
use clap::Parser;

fn main() -> ExitCode {
    let config = RunConfig::from(Cli::parse());
    let report = run(&config);
    print!("{}", render(&report, config.format));
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    ExitCode::from(report.status as u8)
}
