//! Line-based text format for polynomial systems.
//!
//! ```text
//! 2 2
//! 3*x0^2*x1 + x1 - 1;
//! (0.5,-1)*x0 + 2;
//! ```
//!
//! The header gives the equation and variable counts. Each polynomial is a
//! sum of terms ending in `;` and may span lines. A term is an optional
//! sign, an optional coefficient (a decimal or a `(re,im)` pair) and
//! `*`-separated factors `x<i>` or `x<i>^<d>`. `-` and `−` are both minus
//! signs, and `#` starts a comment that runs to the end of the line.

use std::fmt::Write as _;

use polynewt_core::polyrep::{Monomial, PolyError, PolySystem};
use polynewt_core::Scalar;

use super::scalar::{parse_scalar, write_scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, FormatError> {
        Err(FormatError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Skips whitespace and comments, stopping before a newline when
    /// `newlines` is false.
    fn skip_blank(&mut self, newlines: bool) {
        while let Some(&c) = self.chars.peek() {
            if c == '#' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() && (newlines || c != '\n') {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_blank(true);
        self.chars.peek().copied()
    }

    fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(want) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn integer(&mut self, what: &str) -> Result<usize, FormatError> {
        let mut digits = String::new();
        while let Some(&c) = self.chars.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            digits.push(c);
            self.bump();
        }
        if digits.is_empty() {
            return self.error(format!("expected {what}"));
        }
        digits
            .parse()
            .or_else(|_| self.error(format!("{what} `{digits}` is too large")))
    }

    fn literal(&mut self) -> String {
        let mut out = String::new();
        self.skip_blank(true);
        if let Some(&c) = self.chars.peek() {
            if c == '-' || c == '+' {
                out.push(c);
                self.bump();
            }
        }
        while let Some(&c) = self.chars.peek() {
            let exp_sign = (c == '-' || c == '+') && out.ends_with(['e', 'E']);
            if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || exp_sign {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        out
    }
}

fn is_minus(c: char) -> bool {
    c == '-' || c == '\u{2212}'
}

fn coefficient<S: Scalar>(cur: &mut Cursor<'_>) -> Result<S, FormatError> {
    let (line, col) = (cur.line, cur.col);
    let at = |msg: String| FormatError::Syntax { line, col, msg };
    let (re, im) = if cur.eat('(') {
        let re = cur.literal();
        if !cur.eat(',') {
            return cur.error("expected `,` in complex coefficient");
        }
        let im = cur.literal();
        if !cur.eat(')') {
            return cur.error("expected `)` after complex coefficient");
        }
        (re, Some(im))
    } else {
        (cur.literal(), None)
    };
    parse_scalar::<S>(&re, im.as_deref()).map_err(|e| at(e.to_string()))
}

fn factor(cur: &mut Cursor<'_>, n_vars: usize) -> Result<(usize, u32), FormatError> {
    if cur.peek() != Some('x') {
        return cur.error("expected a variable `x<i>`");
    }
    let (line, col) = (cur.line, cur.col);
    cur.bump();
    let var = cur.integer("variable index")?;
    if var >= n_vars {
        return Err(FormatError::Syntax {
            line,
            col,
            msg: format!("variable x{var} is out of range for {n_vars} variables"),
        });
    }
    let exp = if cur.eat('^') {
        cur.skip_blank(true);
        let e = cur.integer("exponent")?;
        u32::try_from(e).or_else(|_| cur.error("exponent is too large"))?
    } else {
        1
    };
    Ok((var, exp))
}

fn term<S: Scalar>(cur: &mut Cursor<'_>, n_vars: usize, negate: bool) -> Result<Monomial<S>, FormatError> {
    let mut coeff = S::one();
    let mut factors = Vec::new();
    match cur.peek() {
        Some('x') => factors.push(factor(cur, n_vars)?),
        Some(c) if c == '(' || c == '.' || c.is_ascii_digit() => coeff = coefficient(cur)?,
        _ => return cur.error("expected a term"),
    }
    while cur.eat('*') {
        factors.push(factor(cur, n_vars)?);
    }
    if negate {
        coeff = -coeff;
    }
    Monomial::new(coeff, factors).map_err(FormatError::from)
}

fn polynomial<S: Scalar>(cur: &mut Cursor<'_>, n_vars: usize) -> Result<Vec<Monomial<S>>, FormatError> {
    let mut terms = Vec::new();
    loop {
        let negate = match cur.peek() {
            Some('+') => {
                cur.bump();
                false
            }
            Some(c) if is_minus(c) => {
                cur.bump();
                true
            }
            Some(_) if terms.is_empty() => false,
            Some(_) => return cur.error("expected `+`, `-` or `;`"),
            None => return cur.error("unexpected end of input, expected `;`"),
        };
        terms.push(term(cur, n_vars, negate)?);
        if cur.eat(';') {
            return Ok(terms);
        }
    }
}

/// Parses a system, rounding every coefficient once to the precision of
/// `S`.
pub fn parse_system<S: Scalar>(text: &str) -> Result<PolySystem<S>, FormatError> {
    let mut cur = Cursor::new(text);
    cur.skip_blank(true);
    let m = cur.integer("equation count")?;
    cur.skip_blank(false);
    let n = cur.integer("variable count")?;
    cur.skip_blank(false);
    if !matches!(cur.chars.peek(), None | Some('\n')) {
        return cur.error("header must be `m n` on its own line");
    }
    if m == 0 || n == 0 {
        return cur.error("equation and variable counts must be positive");
    }
    let mut polys = Vec::with_capacity(m);
    for _ in 0..m {
        if cur.peek().is_none() {
            return cur.error(format!("expected {m} polynomials, found {}", polys.len()));
        }
        polys.push(polynomial(&mut cur, n)?);
    }
    if cur.peek().is_some() {
        return cur.error(format!("text after the last of {m} polynomials"));
    }
    Ok(PolySystem::new(n, polys)?)
}

fn write_term<S: Scalar>(out: &mut String, mon: &Monomial<S>, first: bool) {
    let mut coeff = mon.coeff;
    if S::IS_COMPLEX {
        if !first {
            out.push_str(" + ");
        }
    } else if coeff.re() < S::Real::zero() {
        out.push_str(if first { "-" } else { " - " });
        coeff = -coeff;
    } else if !first {
        out.push_str(" + ");
    }
    write_scalar(out, coeff);
    for &(var, exp) in mon.exponents() {
        if exp == 1 {
            let _ = write!(out, "*x{var}");
        } else {
            let _ = write!(out, "*x{var}^{exp}");
        }
    }
}

/// Canonical text: one polynomial per line, every coefficient explicit and
/// exact, `^1` omitted, and `0;` for a zero polynomial.
pub fn serialize_system<S: Scalar>(sys: &PolySystem<S>) -> String {
    let mut out = format!("{} {}\n", sys.num_polys(), sys.n_vars());
    for poly in sys.polys() {
        if poly.is_empty() {
            out.push('0');
        }
        for (k, mon) in poly.iter().enumerate() {
            write_term(&mut out, mon, k == 0);
        }
        out.push_str(";\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use polynewt_core::{Complex, DoubleDouble};

    #[test]
    fn two_variable_round_trip() {
        let text = "2 2\n1 + 3*x0^2*x1 \u{2212} 1;\nx1 - 0.5*x0;\n";
        let sys = parse_system::<f64>(text).unwrap();
        assert_eq!(sys.polys()[0].len(), 1);
        assert_eq!(sys.polys()[0][0].coeff, 3.0);
        let canon = serialize_system(&sys);
        assert_eq!(canon, "2 2\n3e0*x0^2*x1;\n-5e-1*x0 + 1e0*x1;\n");
        assert_eq!(parse_system::<f64>(&canon).unwrap(), sys);
        assert_eq!(serialize_system(&parse_system::<f64>(&canon).unwrap()), canon);
    }

    #[test]
    fn complex_coefficients() {
        type C = Complex<DoubleDouble>;
        let sys = parse_system::<C>("1 1\n(0.5, -1)*x0 - (1,1);").unwrap();
        let p = &sys.polys()[0];
        assert_eq!(p[0].coeff, C::new(0.5.into(), (-1.0).into()));
        assert_eq!(p[1].coeff, C::new((-1.0).into(), (-1.0).into()));
        let canon = serialize_system(&sys);
        assert_eq!(canon, "1 1\n(5e-1,-1e0)*x0 + (-1e0,-1e0);\n");
        assert_eq!(parse_system::<C>(&canon).unwrap(), sys);
    }

    #[test]
    fn zero_polynomial_and_comments() {
        let sys = parse_system::<f64>("# header\n2 1\nx0 - x0;  # cancels\n+x0^0 ;").unwrap();
        assert!(sys.polys()[0].is_empty());
        assert_eq!(serialize_system(&sys), "2 1\n0;\n1e0;\n");
    }

    fn syntax(text: &str) -> (usize, usize, String) {
        match parse_system::<f64>(text) {
            Err(FormatError::Syntax { line, col, msg }) => (line, col, msg),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        let (line, col, msg) = syntax("1 1\nx0^;");
        assert_eq!((line, col), (2, 4));
        assert!(msg.contains("exponent"), "{msg}");
        let (line, col, msg) = syntax("1 2\n2*x0 + x2;");
        assert_eq!((line, col), (2, 8));
        assert!(msg.contains("out of range"), "{msg}");
        assert!(syntax("1 1\nx0").2.contains("end of input"));
        assert!(syntax("2 1\nx0;").2.contains("expected 2"));
        assert!(syntax("1 1\nx0; x0;").2.contains("after the last"));
        assert!(syntax("1 1 1\nx0;").2.contains("header"));
        assert!(syntax("1 1\n(1,2)*x0;").2.contains("imaginary"));
        assert!(syntax("1 1\n1.2.3;").2.contains("1.2.3"));
        assert!(syntax("1 1\nx0 x0;").2.contains("expected"));
    }
}
