//! Library side of the `fml` command-line tool: argument grammar,
//! configuration and the subcommand implementations. `main.rs` only wires
//! stdout, stderr and the exit code.

pub mod args;
mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;

use clap::Parser;

pub use args::{Cli, Format};
pub use config::{RunConfig, CONFIG_ENV};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] fml_core::Error),
    #[error("{0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// 2 for bad input, 1 for failures of the tool itself.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(_) | CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

/// Runs a parsed command line and returns what belongs on stdout.
pub fn execute(cli: &Cli, env_config: Option<OsString>) -> Result<String, CliError> {
    let cfg = RunConfig::resolve(
        &cli.global,
        env_config.filter(|p| !p.is_empty()).map(Into::into),
    )?;
    commands::dispatch(&cli.command, &cfg)
}

/// Parses `argv` and runs it; returns `(exit code, stdout, stderr)`.
pub fn run<I, T>(argv: I, env_config: Option<OsString>) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                (0, rendered, String::new())
            } else {
                (2, String::new(), rendered)
            };
        }
    };
    match execute(&cli, env_config) {
        Ok(out) => (0, out, String::new()),
        Err(e) => (e.exit_code(), String::new(), format!("error: {e}\n")),
    }
}
