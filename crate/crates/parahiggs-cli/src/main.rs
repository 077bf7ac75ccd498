mod args;
mod run;
mod sweep;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;
use serde_json::Value;

use args::{Cli, Command};
use run::{Failure, Output};

#[derive(Serialize)]
struct Versions {
    parahiggs: &'static str,
    report: u32,
}

/// The envelope every JSON-producing command prints.
#[derive(Serialize)]
struct RunReport {
    command: String,
    input: Value,
    result: Value,
    seed: Option<u64>,
    versions: Versions,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
}

fn command_name(c: &Command) -> String {
    let v = run::to_value(c);
    let mut parts = Vec::new();
    let mut cur = &v;
    // externally tagged enums nest as {"variant": {...}}
    while let Value::Object(m) = cur {
        if m.len() != 1 {
            break;
        }
        let (k, inner) = m.iter().next().expect("one key");
        parts.push(k.clone());
        cur = inner;
    }
    parts.join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    let out = run::run(&cli);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let mut stdout = std::io::stdout().lock();
    match out {
        Ok(Output::Csv(text)) => {
            let _ = stdout.write_all(text.as_bytes());
            if cli.timing {
                eprintln!("wall time: {elapsed:.3} ms");
            }
            ExitCode::SUCCESS
        }
        Ok(Output::Json { result, seed }) => {
            let report = RunReport {
                command: command_name(&cli.command),
                input: run::to_value(&cli),
                result,
                seed,
                versions: Versions {
                    parahiggs: env!("CARGO_PKG_VERSION"),
                    report: 1,
                },
                wall_time_ms: cli.timing.then_some(elapsed),
            };
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            let _ = writeln!(stdout, "{text}");
            ExitCode::SUCCESS
        }
        Err(f) => fail(f),
    }
}

fn fail(f: Failure) -> ExitCode {
    eprintln!("error: {}", f.message());
    ExitCode::from(f.code() as u8)
}
