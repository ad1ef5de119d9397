//! Plain-text matrices: one row per line, entries separated by spaces,
//! complex entries written `(re,im)`, every entry exact.

use polynewt_core::mgs::{Matrix, QRFactors};
use polynewt_core::xprec::XprecError;
use polynewt_core::Scalar;

use super::scalar::{parse_scalar, write_scalar};
use super::system::FormatError;

pub fn write_matrix<S: Scalar>(out: &mut String, a: &Matrix<S>) {
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if j > 0 {
                out.push(' ');
            }
            write_scalar(out, a[(i, j)]);
        }
        out.push('\n');
    }
}

pub fn matrix_text<S: Scalar>(a: &Matrix<S>) -> String {
    let mut out = String::new();
    write_matrix(&mut out, a);
    out
}

fn entry<S: Scalar>(tok: &str, line: usize, col: usize) -> Result<S, FormatError> {
    let parsed = match tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        Some(inner) => match inner.split_once(',') {
            Some((re, im)) => parse_scalar::<S>(re.trim(), Some(im.trim())),
            None => Err(XprecError::InvalidLiteral(tok.to_string())),
        },
        None => parse_scalar::<S>(tok, None),
    };
    parsed.map_err(|e| FormatError::Syntax {
        line,
        col,
        msg: e.to_string(),
    })
}

/// Parses the text written by [`write_matrix`]. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_matrix<S: Scalar>(text: &str) -> Result<Matrix<S>, FormatError> {
    let mut rows: Vec<Vec<S>> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        let mut offset = 0;
        for tok in raw.split_whitespace() {
            let col = raw[offset..].find(tok).map_or(1, |p| offset + p + 1);
            offset = col - 1 + tok.len();
            row.push(entry(tok, k + 1, col)?);
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(FormatError::Syntax {
                    line: k + 1,
                    col: 1,
                    msg: format!("row has {} entries, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(FormatError::Syntax {
            line: 1,
            col: 1,
            msg: "empty matrix".into(),
        });
    }
    let cols = rows[0].len();
    Ok(Matrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

/// `Q` and `R` under `Q <rows> <cols>` and `R <rows> <cols>` headers.
pub fn dump_qr<S: Scalar>(f: &QRFactors<S>) -> String {
    let mut out = format!("Q {} {}\n", f.q.rows(), f.q.cols());
    write_matrix(&mut out, &f.q);
    out.push_str(&format!("R {} {}\n", f.r.rows(), f.r.cols()));
    write_matrix(&mut out, &f.r);
    out
}
