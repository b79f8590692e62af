//! `qid` command-line tool.
//!
//! Reports go to stdout (or `--out`), diagnostics to stderr. Exit status is
//! 0 on success, 1 on usage or input errors and 2 when a check fails.

mod args;
mod number;
mod report;
mod svg;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::{Cli, Command, Format, McKind};
pub use number::{format_f64, to_json};
pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK: i32 = 2;

/// Parses `argv` (program name first), runs the command and returns the exit
/// status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let outcome = match cli.common.workers {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| report::execute(&cli.command)),
            Err(e) => Err(report::Failure::Usage(format!("cannot start {k} workers: {e}"))),
        },
        None => report::execute(&cli.command),
    };
    let report = match outcome {
        Ok(r) => r,
        Err(report::Failure::Usage(msg)) => {
            eprintln!("qid: error: {msg}");
            return EXIT_USAGE;
        }
    };
    if let (Command::Figure { svg: Some(path), .. }, Some(chart)) = (&cli.command, report.chart()) {
        if let Err(e) = std::fs::write(path, chart) {
            eprintln!("qid: error: writing {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    let text = match cli.common.output {
        Format::Json => report.json(),
        Format::Csv => report.csv(),
    };
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("writing {}: {e}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| e.to_string())
        }
    };
    if let Err(msg) = written {
        eprintln!("qid: error: {msg}");
        return EXIT_USAGE;
    }
    if report.passed() {
        EXIT_OK
    } else {
        eprintln!("qid: check failed");
        EXIT_CHECK
    }
}
