//! Exact decimal conversion for multi-component values.
//!
//! A value is the exact dyadic sum of its binary64 components, so both
//! directions are done in big-integer arithmetic: printing rounds the exact
//! value once to the requested digits, and parsing rounds the exact decimal
//! to binary64 greedily, subtracting each component before rounding the
//! next.

use alloc::format;
use alloc::string::{String, ToString};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};

use super::eft::pow2;
use super::XprecError;

/// Largest decimal exponent accepted by the parser.
const MAX_DECIMAL_EXP: i64 = 400;

/// `x = sign * m * 2^e` with `m` an integer.
fn decompose(x: f64) -> (bool, u64, i32) {
    let bits = x.to_bits();
    let neg = bits >> 63 == 1;
    let be = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if be == 0 {
        (neg, frac, -1074)
    } else {
        (neg, frac | (1u64 << 52), be - 1075)
    }
}

/// Exact sum of the components as `M * 2^E`.
fn exact_value(comps: &[f64]) -> (BigInt, i32) {
    let parts: alloc::vec::Vec<_> = comps
        .iter()
        .filter(|c| **c != 0.0)
        .map(|&c| decompose(c))
        .collect();
    let Some(emin) = parts.iter().map(|p| p.2).min() else {
        return (BigInt::zero(), 0);
    };
    let mut total = BigInt::zero();
    for (neg, m, e) in parts {
        let term = BigInt::from(m) << ((e - emin) as usize);
        if neg {
            total -= term;
        } else {
            total += term;
        }
    }
    (total, emin)
}

fn pow10(k: u32) -> BigUint {
    BigUint::from(10u32).pow(k)
}

/// Formats the exact sum of `comps`, correctly rounded (half to even) to
/// `digits` significant decimal digits.
pub(crate) fn format_components(comps: &[f64], digits: usize) -> String {
    if let Some(bad) = comps.iter().find(|c| !c.is_finite()) {
        return format!("{}", bad);
    }
    let digits = digits.max(1);
    let (m, e) = exact_value(comps);
    if m.is_zero() {
        return "0e0".to_string();
    }
    let neg = m.sign() == Sign::Minus;
    let mag = m.magnitude().clone();
    let bits = mag.bits() as i64;
    let log2 = (bits - 1 + e as i64) as f64;
    let mut d10 = libm::floor(log2 * core::f64::consts::LOG10_2) as i64;
    let lower = pow10(digits as u32 - 1);
    let upper = pow10(digits as u32);
    let q = loop {
        let p = d10 - digits as i64 + 1;
        let mut num = mag.clone();
        let mut den = BigUint::one();
        if e >= 0 {
            num <<= e as usize;
        } else {
            den <<= (-e) as usize;
        }
        if p >= 0 {
            den *= pow10(p as u32);
        } else {
            num *= pow10((-p) as u32);
        }
        let (mut q, r) = num.div_rem(&den);
        let twice = r << 1usize;
        if twice > den || (twice == den && q.is_odd()) {
            q += 1u32;
        }
        if q >= upper {
            d10 += 1;
        } else if q < lower {
            d10 -= 1;
        } else {
            break q;
        }
    };
    let text = q.to_string();
    let (lead, rest) = text.split_at(1);
    let rest = rest.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if rest.is_empty() {
        format!("{sign}{lead}e{d10}")
    } else {
        format!("{sign}{lead}.{rest}e{d10}")
    }
}

struct Literal {
    neg: bool,
    digits: BigUint,
    exp10: i64,
}

fn scan(text: &str) -> Result<Literal, XprecError> {
    let bad = || XprecError::InvalidLiteral(text.to_string());
    let s = text.trim();
    let bytes = s.as_bytes();
    let mut i = 0;
    let mut neg = false;
    if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
        neg = bytes[i] == b'-';
        i += 1;
    }
    let mut mantissa = String::new();
    let mut frac_digits = 0i64;
    let mut seen_dot = false;
    while i < bytes.len() {
        match bytes[i] {
            b'0'..=b'9' => {
                mantissa.push(bytes[i] as char);
                if seen_dot {
                    frac_digits += 1;
                }
            }
            b'.' if !seen_dot => seen_dot = true,
            _ => break,
        }
        i += 1;
    }
    if mantissa.is_empty() {
        return Err(bad());
    }
    let mut exp = 0i64;
    if i < bytes.len() {
        if bytes[i] != b'e' && bytes[i] != b'E' {
            return Err(bad());
        }
        let tail = &s[i + 1..];
        if tail.is_empty() || tail == "+" || tail == "-" {
            return Err(bad());
        }
        exp = tail.parse::<i64>().map_err(|_| bad())?;
    }
    let digits = BigUint::parse_bytes(mantissa.as_bytes(), 10).ok_or_else(bad)?;
    Ok(Literal {
        neg,
        digits,
        exp10: exp - frac_digits,
    })
}

/// Shortest rounding of `comps` with at least `min_digits` digits whose
/// greedy re-parse into `comps.len()` components gives back `comps`.
pub(crate) fn format_round_trip(comps: &[f64], min_digits: usize) -> String {
    let mut digits = min_digits;
    loop {
        let text = format_components(comps, digits);
        let back = parse_components(&text, comps.len());
        let same = back.is_ok_and(|b| b.iter().zip(comps).all(|(x, y)| x == y));
        if same || digits >= 800 {
            return text;
        }
        digits += 1;
    }
}

/// Checks decimal-literal syntax without converting.
pub(crate) fn validate_literal(text: &str) -> Result<(), XprecError> {
    scan(text).map(|_| ())
}

/// Nearest binary64 (ties to even) to `num / den`, both positive.
fn round_rational(num: &BigUint, den: &BigUint) -> f64 {
    let two52 = BigUint::one() << 52usize;
    let two53 = BigUint::one() << 53usize;
    let mut e = num.bits() as i64 - den.bits() as i64 - 53;
    loop {
        let ec = e.max(-1074);
        let (n, d) = if ec >= 0 {
            (num.clone(), den << (ec as usize))
        } else {
            (num << ((-ec) as usize), den.clone())
        };
        let (mut q, r) = n.div_rem(&d);
        if q >= two53 {
            e = ec + 1;
            continue;
        }
        if q < two52 && ec > -1074 {
            e -= 1;
            continue;
        }
        let twice = r << 1usize;
        if twice > d || (twice == d && q.is_odd()) {
            q += 1u32;
        }
        let mant = q.to_u64().unwrap_or(u64::MAX) as f64;
        if ec > 971 {
            return f64::INFINITY;
        }
        return mant * pow2(ec as i32);
    }
}

/// Parses `text` and splits its exact value into `n` binary64 components.
pub(crate) fn parse_components(text: &str, n: usize) -> Result<[f64; 4], XprecError> {
    let lit = scan(text)?;
    let mut out = [0.0f64; 4];
    if lit.digits.is_zero() {
        return Ok(out);
    }
    let ndig = lit.digits.to_string().len() as i64;
    if lit.exp10 + ndig > MAX_DECIMAL_EXP {
        return Err(XprecError::OutOfRange(text.to_string()));
    }
    if lit.exp10 + ndig < -MAX_DECIMAL_EXP {
        return Ok(out);
    }
    let (mut num, mut den) = if lit.exp10 >= 0 {
        (
            BigInt::from(lit.digits * pow10(lit.exp10 as u32)),
            BigUint::one(),
        )
    } else {
        (BigInt::from(lit.digits), pow10((-lit.exp10) as u32))
    };
    if lit.neg {
        num = -num;
    }
    for slot in out.iter_mut().take(n) {
        if num.is_zero() {
            break;
        }
        let mag = round_rational(num.magnitude(), &den);
        if !mag.is_finite() {
            return Err(XprecError::OutOfRange(text.to_string()));
        }
        let c = if num.sign() == Sign::Minus { -mag } else { mag };
        *slot = c;
        let (cneg, m, e) = decompose(c);
        let mut term = BigInt::from(m);
        if cneg {
            term = -term;
        }
        if e >= 0 {
            num -= (term << (e as usize)) * BigInt::from(den.clone());
        } else {
            num = (num << ((-e) as usize)) - term * BigInt::from(den.clone());
            den <<= (-e) as usize;
        }
    }
    Ok(out)
}
