use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use dynkin_count::cli::{self, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let execution = cli::run(&cli);
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    let _ = stdout.write_all(execution.stdout.as_bytes());
    let _ = stderr.write_all(execution.stderr.as_bytes());
    let _ = stdout.flush();
    let _ = stderr.flush();
    ExitCode::from(execution.exit_code as u8)
}
