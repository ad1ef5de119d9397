//! Text forms of scalars shared by the file formats.

use polynewt_core::xprec::XprecError;
use polynewt_core::{RealScalar, Scalar};
use serde::Serialize;

/// Parses a real literal, or a complex one when `im` is given.
pub fn parse_scalar<S: Scalar>(re: &str, im: Option<&str>) -> Result<S, XprecError> {
    let re = S::Real::parse_decimal(re)?;
    let im = match im {
        Some(t) => S::Real::parse_decimal(t)?,
        None => S::Real::zero(),
    };
    S::from_parts(re, im)
}

/// Appends the exact text of `x`: a decimal, or `(re,im)` for complex
/// scalars.
pub fn write_scalar<S: Scalar>(out: &mut String, x: S) {
    if S::IS_COMPLEX {
        out.push('(');
        out.push_str(&x.re().to_canonical());
        out.push(',');
        out.push_str(&x.im().to_canonical());
        out.push(')');
    } else {
        out.push_str(&x.re().to_canonical());
    }
}

pub fn scalar_text<S: Scalar>(x: S) -> String {
    let mut s = String::new();
    write_scalar(&mut s, x);
    s
}

/// A scalar in JSON: a decimal string, or `[re, im]` for complex values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum JsonScalar {
    Real(String),
    Complex([String; 2]),
}

impl JsonScalar {
    pub fn new<S: Scalar>(x: S) -> Self {
        if S::IS_COMPLEX {
            JsonScalar::Complex([x.re().to_canonical(), x.im().to_canonical()])
        } else {
            JsonScalar::Real(x.re().to_canonical())
        }
    }
}
