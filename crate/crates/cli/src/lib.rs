//! Command-line driver: manifests, sweep plans and CSV output.

use std::fmt;

pub mod manifest;
mod presets;
pub mod run;

pub use manifest::{parse_config, Command, RunManifest};
pub use run::{plan, run};

#[derive(Debug)]
pub enum CliError {
    Clap(clap::Error),
    Usage(String),
    Core(sqc::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 0 for help output, 2 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) if !e.use_stderr() => 0,
            CliError::Core(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Clap(e) => write!(f, "{}", e.to_string().trim_end()),
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<sqc::Error> for CliError {
    fn from(e: sqc::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Parses, runs, and reports; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let result = parse_config(args, None).and_then(|m| run(&m));
    match result {
        Ok(()) => 0,
        Err(CliError::Clap(e)) if !e.use_stderr() => {
            let _ = e.print();
            0
        }
        Err(e) => {
            eprintln!("sqc: {e}");
            e.exit_code()
        }
    }
}
