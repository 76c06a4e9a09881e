use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use nlquad_bench::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(outcome.text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("nlq: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
