use std::process::ExitCode;

use clap::Parser;
use steklov_lab::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("steklov: error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
