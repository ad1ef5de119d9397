//! Exact dyadic rationals `m * 2^e` for checking floating-point results.

#![allow(dead_code)]

use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone)]
pub struct Dyadic {
    m: BigInt,
    e: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Self { m: BigInt::zero(), e: 0 }
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite oracle input {x}");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let be = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1 << 52) - 1)) as i64;
        let (mant, e) = if be == 0 { (frac, -1074) } else { (frac | (1 << 52), be - 1075) };
        let m = if x < 0.0 { -BigInt::from(mant) } else { BigInt::from(mant) };
        Self { m, e }
    }

    pub fn sum_of(parts: &[f64]) -> Self {
        parts.iter().fold(Self::zero(), |acc, &p| acc + Self::from_f64(p))
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn abs(&self) -> Self {
        Self { m: self.m.abs(), e: self.e }
    }

    fn align(&self, other: &Self) -> (BigInt, BigInt, i64) {
        let e = self.e.min(other.e);
        (
            &self.m << (self.e - e) as usize,
            &other.m << (other.e - e) as usize,
            e,
        )
    }

    /// `(mantissa, exponent)` with `|self| ~ mantissa * 2^exponent`.
    fn approx(&self) -> (f64, i64) {
        let bits = self.m.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (&self.m >> shift as usize).to_f64().unwrap();
        (top, self.e + shift)
    }

    /// `self / other` as a binary64 approximation.
    pub fn ratio(&self, other: &Self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (a, ea) = self.approx();
        let (b, eb) = other.approx();
        let d = ea - eb;
        (a / b) * 2f64.powi(d.clamp(-2000, 2000) as i32)
    }

    /// `|self - exact| / |exact|`, or the absolute error when `exact` is 0.
    pub fn rel_err(&self, exact: &Self) -> f64 {
        let diff = (self.clone() - exact.clone()).abs();
        if exact.is_zero() {
            return diff.ratio(&Self::from_f64(1.0));
        }
        diff.ratio(&exact.abs())
    }
}

impl Add for Dyadic {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (x, y, e) = self.align(&b);
        Self { m: x + y, e }
    }
}

impl Sub for Dyadic {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Neg for Dyadic {
    type Output = Self;
    fn neg(self) -> Self {
        Self { m: -self.m, e: self.e }
    }
}

impl Mul for Dyadic {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        Self { m: self.m * b.m, e: self.e + b.e }
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        let (x, y, _) = self.align(other);
        x == y
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (x, y, _) = self.align(other);
        Some(x.cmp(&y))
    }
}
