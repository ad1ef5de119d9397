//! Error-free transformations on binary64.
//!
//! Every routine returns a rounded result together with its exact rounding
//! error, so that `result + error` equals the exact mathematical value.
//! Overflow is out of contract: an infinite intermediate propagates and the
//! error term becomes NaN.

/// `s = fl(a + b)` and `e` with `s + e = a + b` exactly (Knuth).
#[inline(always)]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Like [`two_sum`] but requires `|a| >= |b|` (or `a == 0`).
#[inline(always)]
pub fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// `d = fl(a - b)` and its exact error.
#[inline(always)]
pub fn two_diff(a: f64, b: f64) -> (f64, f64) {
    let s = a - b;
    let bb = s - a;
    let e = (a - (s - bb)) - (b + bb);
    (s, e)
}

/// Veltkamp splitting of `a` into two 26-bit halves, `a = hi + lo`.
#[inline(always)]
pub fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
    let t = SPLITTER * a;
    let hi = t - (t - a);
    let lo = a - hi;
    (hi, lo)
}

/// `p = fl(a * b)` and `e` with `p + e = a * b` exactly.
///
/// With the `std` feature the error term comes from a fused multiply-add,
/// otherwise from Dekker's product on Veltkamp splits. Both give the same
/// `(p, e)` pair since the error of a product is representable.
#[inline(always)]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, prod_err(a, b, p))
}

#[cfg(feature = "std")]
#[inline(always)]
fn prod_err(a: f64, b: f64, p: f64) -> f64 {
    a.mul_add(b, -p)
}

#[cfg(not(feature = "std"))]
#[inline(always)]
fn prod_err(a: f64, b: f64, p: f64) -> f64 {
    dekker_err(a, b, p)
}

#[allow(dead_code)]
#[inline(always)]
pub(crate) fn dekker_err(a: f64, b: f64, p: f64) -> f64 {
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    ((ah * bh - p) + ah * bl + al * bh) + al * bl
}

/// `p = fl(a * a)` and its exact error.
#[inline(always)]
pub fn two_sqr(a: f64) -> (f64, f64) {
    two_prod(a, a)
}

/// Sum of three values into a leading pair; `(a, b, c)` is overwritten by
/// a rearrangement with `a` the rounded total.
#[inline(always)]
pub(crate) fn three_sum(a: &mut f64, b: &mut f64, c: &mut f64) {
    let (t1, t2) = two_sum(*a, *b);
    let (s, t3) = two_sum(*c, t1);
    *a = s;
    let (u, v) = two_sum(t2, t3);
    *b = u;
    *c = v;
}

/// As [`three_sum`] but folds the last two errors into `b`.
#[inline(always)]
pub(crate) fn three_sum2(a: &mut f64, b: &mut f64, c: f64) {
    let (t1, t2) = two_sum(*a, *b);
    let (s, t3) = two_sum(c, t1);
    *a = s;
    *b = t2 + t3;
}

/// `2^e` as a binary64, including the subnormal range.
pub(crate) fn pow2(e: i32) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else if e >= -1074 {
        f64::from_bits(1u64 << (e + 1074))
    } else {
        0.0
    }
}
