//! Failures of a CLI run, their exit codes and one-line JSON form.

use std::io;
use std::path::Path;

use polynewt_core::evaldiff::EvalError;
use polynewt_core::mgs::MgsError;
use polynewt_core::newton::NewtonError;
use polynewt_core::Error;
use serde_json::json;

use crate::formats::FormatError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("{}", .0.join("; "))]
    Usage(Vec<String>),
    #[error("{module}/{operation}: {message}")]
    Numerical {
        module: &'static str,
        operation: &'static str,
        index: Option<usize>,
        iteration: Option<usize>,
        message: String,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
}

impl CliError {
    pub fn io(path: &Path, e: io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    pub fn stdout(e: io::Error) -> Self {
        CliError::Io {
            path: "<stdout>".into(),
            message: e.to_string(),
        }
    }

    pub fn format(path: &Path, e: FormatError) -> Self {
        CliError::Format {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical { .. } => EXIT_NUMERICAL,
            CliError::Io { .. } | CliError::Format { .. } => EXIT_IO,
        }
    }

    /// The error as a single line of JSON.
    pub fn to_json_line(&self) -> String {
        let v = match self {
            CliError::Usage(problems) => json!({"error": "usage", "problems": problems}),
            CliError::Numerical {
                module,
                operation,
                index,
                iteration,
                message,
            } => json!({
                "error": "numerical",
                "module": module,
                "operation": operation,
                "index": index,
                "iteration": iteration,
                "message": message,
            }),
            CliError::Io { path, message } => json!({"error": "io", "path": path, "message": message}),
            CliError::Format { path, message } => json!({"error": "format", "path": path, "message": message}),
        };
        v.to_string()
    }
}

fn mgs_index(e: &MgsError) -> Option<usize> {
    match e {
        MgsError::Breakdown { column } => Some(*column),
        MgsError::Singular { index } => Some(*index),
        _ => None,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let module = e.module();
        let (operation, index, iteration) = match &e {
            Error::Newton(NewtonError::Eval { iter, source }) => ("evaluate", eval_index(source), Some(*iter)),
            Error::Newton(NewtonError::Solve { iter, source }) => ("solve", mgs_index(source), Some(*iter)),
            Error::Newton(_) => ("newton", None, None),
            Error::Mgs(m) => ("factor", mgs_index(m), None),
            Error::Eval(ev) => ("evaluate", eval_index(ev), None),
            Error::Bench(_) | Error::Poly(_) | Error::Xprec(_) => return CliError::Usage(vec![message]),
        };
        CliError::Numerical {
            module,
            operation,
            index,
            iteration,
            message,
        }
    }
}

fn eval_index(e: &EvalError) -> Option<usize> {
    match e {
        EvalError::TooFewFactors { n, .. } => Some(*n),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn breakdown_maps_to_numerical() {
        let e: CliError = Error::from(NewtonError::Solve {
            iter: 2,
            source: MgsError::Breakdown { column: 5 },
        })
        .into();
        assert_eq!(e.exit_code(), EXIT_NUMERICAL);
        let v: serde_json::Value = serde_json::from_str(&e.to_json_line()).unwrap();
        assert_eq!(v["module"], "mgs");
        assert_eq!(v["operation"], "solve");
        assert_eq!(v["index"], 5);
        assert_eq!(v["iteration"], 2);
    }

    #[test]
    fn lines_are_single() {
        let e = CliError::Usage(vec!["a\nb".into(), "c".into()]);
        assert!(!e.to_json_line().contains('\n'));
        assert_eq!(e.exit_code(), EXIT_USAGE);
        assert_eq!(CliError::stdout(io::Error::other("x")).exit_code(), EXIT_IO);
    }
}
