use clap::Parser;
use ifsx_cli::commands::{run, Cli, BUDGET_ENV};
use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let env = std::env::var(BUDGET_ENV).ok();
    match run(&cli, env.as_deref()) {
        Ok(outcome) => {
            let _ = std::io::stdout().write_all(outcome.output.as_bytes());
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
