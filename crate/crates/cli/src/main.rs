mod args;
mod commands;

use args::{Cli, Format};
use clap::Parser;
use serde::Serialize;
use serde_json::Value;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    params: &'a Value,
    result: &'a Value,
    elapsed_ms: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let start = Instant::now();
    let out = match commands::run(&cli.command) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let rendered = match cli.format {
        Format::Json => {
            let env = Envelope {
                command: out.command,
                params: &out.params,
                result: &out.result,
                elapsed_ms: u64::try_from(start.elapsed().as_millis()).unwrap_or(u64::MAX),
            };
            let mut s = serde_json::to_string_pretty(&env).expect("envelope serializes");
            s.push('\n');
            s
        }
        Format::Csv => out.csv,
        Format::Text => out.text,
    };
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(rendered.as_bytes())
        .and_then(|()| stdout.flush())
        .is_err()
    {
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
