//! Command-line front end for the QSDC simulator: parsing, result
//! documents, and the encoding-table printout.

pub mod args;
pub mod report;
pub mod tables;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::Path;

use thiserror::Error;

use qsdc_core::session::run_monte_carlo_with_threads;

pub use args::{parse_args, CliConfig, Format, OracleConfig, RunConfig};

/// Caps the runner's worker threads when set.
pub const THREADS_ENV: &str = "QSDC_SIM_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Clap(clap::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Runtime(String),

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 0 for help/version, 2 for usage errors, 1 for runtime and I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) => e.exit_code(),
            CliError::Usage(_) => 2,
            CliError::Runtime(_) | CliError::Io { .. } => 1,
        }
    }
}

/// Reads [`THREADS_ENV`]; unset or empty means the runner default.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("{THREADS_ENV}={v} is not a positive integer"))),
        },
        Err(_) => Ok(None),
    }
}

fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Renders the document for a text/json request. When JSON goes to a file,
/// the text summary still goes to stdout.
fn deliver(
    format: Format,
    output: Option<&Path>,
    text: String,
    json: impl FnOnce() -> String,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io {
        path: "stdout".into(),
        source: e,
    };
    match (format, output) {
        (Format::Text, None) => stdout.write_all(text.as_bytes()).map_err(io),
        (Format::Text, Some(path)) => write_output(path, &text),
        (Format::Json, None) => stdout.write_all(json().as_bytes()).map_err(io),
        (Format::Json, Some(path)) => {
            write_output(path, &json())?;
            stdout.write_all(text.as_bytes()).map_err(io)
        }
    }
}

/// Executes a parsed configuration, writing human output to `stdout`.
pub fn execute(config: &CliConfig, threads: Option<usize>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match config {
        CliConfig::Tables => stdout
            .write_all(tables::emit_tables().as_bytes())
            .map_err(|source| CliError::Io {
                path: "stdout".into(),
                source,
            }),
        CliConfig::Run(run) => {
            let stats = run_monte_carlo_with_threads(&run.session, threads)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            deliver(
                run.format,
                run.output.as_deref(),
                report::results_text(&run.session, &stats),
                || report::to_stable_json(&report::results_json(&run.session, &stats)),
                stdout,
            )
        }
        CliConfig::Oracle(oracle) => deliver(
            oracle.format,
            oracle.output.as_deref(),
            report::oracle_text(oracle),
            || report::to_stable_json(&report::oracle_json(oracle)),
            stdout,
        ),
    }
}

/// Full CLI entry point; returns the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = parse_args(argv).and_then(|config| {
        let threads = threads_from_env()?;
        execute(&config, threads, &mut std::io::stdout().lock())
    });
    match result {
        Ok(()) => 0,
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            e.exit_code()
        }
        Err(e) => {
            eprintln!("qsdc-sim: {e}");
            e.exit_code()
        }
    }
}
