use clap::Parser;
use gluon::cli::{render, run, Cli, MAX_VERTICES_ENV};
use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are input errors; help and version are not.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let env = std::env::var(MAX_VERTICES_ENV).ok();
    let start = Instant::now();
    match run(&cli, env.as_deref()) {
        Ok(mut report) => {
            report.timing_ms = Some(start.elapsed().as_millis() as u64);
            print!("{}", render(&report, cli.global.report));
            ExitCode::from(report.outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
