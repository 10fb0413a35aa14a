//! The `heun-connect` command line: argument parsing, the JSON wire format,
//! table output and exit-code policy. `main` is a thin wrapper around [`run`].

pub mod args;
pub mod commands;
pub mod table;
pub mod wire;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Format};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARAMETERS: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Caps the worker pool when set.
pub const THREADS_ENV: &str = "HEUN_CONNECT_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(heun_core::Error),
    Numerical(String),
}

impl From<heun_core::Error> for CliError {
    fn from(e: heun_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) if e.is_parameter_error() => EXIT_PARAMETERS,
            // a vanishing leading coefficient is a property of the parameters
            CliError::Core(heun_core::Error::RecurrenceBreakdown { .. }) => EXIT_PARAMETERS,
            CliError::Core(_) | CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Numerical(m) => f.write_str(m),
        }
    }
}

fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))),
        },
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Option<String>, CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Numerical(e.to_string()))?;
    let output = pool.install(|| commands::dispatch(&cli.command))?;
    let io = |e: std::io::Error| CliError::Numerical(format!("write failed: {e}"));
    match cli.format.unwrap_or(output.default_format) {
        Format::Json => writeln!(out, "{}", output.json).map_err(io)?,
        Format::Csv => output.table.write_csv(&mut *out).map_err(io)?,
        Format::Human => output.table.write_human(&mut *out).map_err(io)?,
        Format::Dat => output.table.write_dat(&mut *out).map_err(io)?,
    }
    Ok(output.failure)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(None) => 0,
        Ok(Some(failure)) => {
            let _ = writeln!(err, "check failed: {failure}");
            EXIT_NUMERICAL
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
