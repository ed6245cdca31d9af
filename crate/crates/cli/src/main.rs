use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use iso_zmc_cli::{init_threads, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| run(&cli));
    match result {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.stdout.as_bytes());
            let _ = std::io::stderr().write_all(out.stderr.as_bytes());
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("iso-zmc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
