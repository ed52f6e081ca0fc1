use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qacp::cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("QACP_LOG")).init();
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match run(&cli, &mut out) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            let _ = out.flush();
            eprintln!("qacp: {e}");
            2
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
