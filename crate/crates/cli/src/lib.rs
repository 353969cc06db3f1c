//! Command-line campaigns for the fractional Hardy inequality.
//!
//! [`run`] is the whole program: it parses the arguments, runs one
//! subcommand and writes its report. Exit codes are 0 when every check
//! passed, 1 when one failed and 2 for configuration or input errors.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod exec;
pub mod output;

use clap::Parser;

pub use error::CliError;
pub use exec::RayonExecutor;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Runs the program on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    match execute(&cli) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

/// Runs a parsed invocation; `Ok(passed)` once the report is written.
pub fn execute(cli: &args::Cli) -> Result<bool, CliError> {
    let (doc, target) = commands::dispatch(cli.command, &cli.opts)?;
    output::emit(&doc.render(target.format)?, target.out.as_deref())?;
    if let Some(path) = &cli.opts.plot_data {
        output::emit(&doc.plot_text(), Some(path))?;
    }
    Ok(doc.passed())
}
