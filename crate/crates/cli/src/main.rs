use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use weylswap_cli::{exit, run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = out
                .write_all(report.stdout.as_bytes())
                .and_then(|_| out.flush())
            {
                eprintln!("error: cannot write output: {e}");
                exit::PRECONDITION
            } else if report.passed {
                exit::OK
            } else {
                exit::VERIFICATION
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
