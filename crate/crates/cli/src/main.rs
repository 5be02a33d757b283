use clap::Parser;
use std::process::ExitCode;
use xx0_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("xx0: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
