//! Text and JSON formats for systems, matrices and traces.

pub mod matrix;
pub mod scalar;
pub mod system;
pub mod trace;

pub use matrix::{dump_qr, matrix_text, parse_matrix, write_matrix};
pub use scalar::{parse_scalar, scalar_text, write_scalar, JsonScalar};
pub use system::{parse_system, serialize_system, FormatError};
pub use trace::{write_csv, write_jsonl, TraceRecord};
