//! Newton traces as JSON lines or CSV, one record per iteration.

use std::io::{self, Write};

use polynewt_core::newton::TraceEntry;
use polynewt_core::{RealScalar, Scalar};
use serde::Serialize;

use super::scalar::JsonScalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub iter: usize,
    pub f_norm: String,
    pub dx_norm: String,
    pub b0: JsonScalar,
    pub dx0: JsonScalar,
    pub x0: JsonScalar,
}

impl TraceRecord {
    pub fn new<S: Scalar>(e: &TraceEntry<S>) -> Self {
        Self {
            iter: e.iter,
            f_norm: e.f_norm.to_canonical(),
            dx_norm: e.dx_norm.to_canonical(),
            b0: JsonScalar::new(e.b0),
            dx0: JsonScalar::new(e.dx0),
            x0: JsonScalar::new(e.x0),
        }
    }
}

pub fn write_jsonl<S: Scalar>(w: &mut dyn Write, entries: &[TraceEntry<S>]) -> io::Result<()> {
    for e in entries {
        serde_json::to_writer(&mut *w, &TraceRecord::new(e))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// CSV with one column per real number: `b0_re, b0_im, ...` for complex
/// runs.
pub fn write_csv<S: Scalar>(w: &mut dyn Write, entries: &[TraceEntry<S>]) -> io::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    let mut header = vec!["iter".to_string(), "f_norm".into(), "dx_norm".into()];
    for name in ["b0", "dx0", "x0"] {
        if S::IS_COMPLEX {
            header.push(format!("{name}_re"));
            header.push(format!("{name}_im"));
        } else {
            header.push(name.into());
        }
    }
    csv.write_record(&header)?;
    for e in entries {
        let mut row = vec![e.iter.to_string(), e.f_norm.to_canonical(), e.dx_norm.to_canonical()];
        for x in [e.b0, e.dx0, e.x0] {
            row.push(x.re().to_canonical());
            if S::IS_COMPLEX {
                row.push(x.im().to_canonical());
            }
        }
        csv.write_record(&row)?;
    }
    csv.flush()
}
