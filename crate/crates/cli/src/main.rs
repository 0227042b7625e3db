use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use evstab_cli::{error_json, exit_code, render, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((report, status)) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(render(&report, cli.format).as_bytes());
            ExitCode::from(status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&error_json(&e)).expect("json"));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
