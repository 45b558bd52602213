use std::io::Write;
use std::process::ExitCode;

use bcb_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout();
    let result = run(&cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bcb: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
