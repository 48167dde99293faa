use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = dyadnet_cli::Cli::parse();
    match dyadnet_cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
