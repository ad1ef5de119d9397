#![allow(dead_code)]

pub mod dyadic;

use polynewt_core::{DoubleDouble, QuadDouble};
use rand::Rng;

/// A binary64 with random sign, mantissa and an exponent in `[-e, e]`.
pub fn wide_f64(rng: &mut impl Rng, e: i32) -> f64 {
    let m: f64 = rng.random_range(1.0..2.0);
    let s = if rng.random_bool(0.5) { -1.0 } else { 1.0 };
    s * m * 2f64.powi(rng.random_range(-e..=e))
}

/// Random double-double with a full-width low part.
pub fn random_dd(rng: &mut impl Rng) -> DoubleDouble {
    let hi = wide_f64(rng, 30);
    let lo = hi * rng.random_range(-1.0..1.0) * 2f64.powi(-53);
    DoubleDouble::new(hi, lo)
}

/// Random quad-double with all four parts populated.
pub fn random_qd(rng: &mut impl Rng) -> QuadDouble {
    let c0 = wide_f64(rng, 30);
    let mut parts = [c0, 0.0, 0.0, 0.0];
    for i in 1..4 {
        parts[i] = parts[i - 1] * rng.random_range(-1.0..1.0) * 2f64.powi(-53);
    }
    QuadDouble::new(parts[0], parts[1], parts[2], parts[3])
}
