//! Command-line harness.

mod args;
mod commands;
mod error;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use polynewt_core::{Complex, DoubleDouble, Precision, QuadDouble};

pub use args::{Benchmark, Cli, Command, CommandKind, RunArgs, RunSpec, Source};
pub use error::{CliError, EXIT_IO, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};

/// Runs the command line `argv` (program name first), writing results to
/// `out` and a one-line JSON diagnostic to `err`. Returns the exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return report(err, &CliError::Usage(vec![first.to_string()]));
        }
    };
    let result = RunSpec::from_cli(cli)
        .map_err(CliError::Usage)
        .and_then(|spec| run_spec(&spec, out));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => report(err, &e),
    }
}

fn report(err: &mut dyn Write, e: &CliError) -> i32 {
    let _ = writeln!(err, "{}", e.to_json_line());
    e.exit_code()
}

/// Runs a validated spec at its precision.
pub fn run_spec(spec: &RunSpec, out: &mut dyn Write) -> Result<(), CliError> {
    use commands::run;
    match (spec.precision, spec.complex) {
        (Precision::D, false) => run::<f64>(spec, out),
        (Precision::D, true) => run::<Complex<f64>>(spec, out),
        (Precision::DD, false) => run::<DoubleDouble>(spec, out),
        (Precision::DD, true) => run::<Complex<DoubleDouble>>(spec, out),
        (Precision::QD, false) => run::<QuadDouble>(spec, out),
        (Precision::QD, true) => run::<Complex<QuadDouble>>(spec, out),
    }
}
