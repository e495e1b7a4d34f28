mod commands;
mod records;

use std::process::ExitCode;

use clap::Parser;

use commands::Cli;

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<cluster_lab::Error>() {
        Some(e) if e.is_precondition() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match commands::run(cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
