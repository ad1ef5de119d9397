//! Crate-level error type.

use crate::bench::BenchError;
use crate::evaldiff::EvalError;
use crate::mgs::MgsError;
use crate::newton::NewtonError;
use crate::polyrep::PolyError;
use crate::xprec::XprecError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Xprec(#[from] XprecError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Mgs(#[from] MgsError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error(transparent)]
    Bench(#[from] BenchError),
}

impl Error {
    /// Name of the module that raised the error.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Xprec(_) => "xprec",
            Error::Poly(_) => "polyrep",
            Error::Eval(_) => "evaldiff",
            Error::Mgs(_) => "mgs",
            Error::Newton(e) => e.module(),
            Error::Bench(_) => "bench",
        }
    }
}
