use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use super::eft::{quick_two_sum, two_prod, two_sum};
use super::{fsqrt, Precision, QuadDouble, RealScalar, Scalar, XprecError};

/// Double-double number: the unevaluated sum `hi + lo` with
/// `fl(hi + lo) == hi`.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    /// Builds a value from two components, renormalizing them.
    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Self { hi, lo }
    }

    /// Builds a value from components that are already non-overlapping.
    #[inline]
    pub const fn from_parts_unchecked(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    #[inline]
    fn from_quick(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Self {
        let (s1, mut s2) = two_sum(self.hi, b);
        s2 += self.lo;
        Self::from_quick(s1, s2)
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p1, mut p2) = two_prod(self.hi, b);
        p2 += self.lo * b;
        Self::from_quick(p1, p2)
    }

    /// Exact multiplication by a power of two.
    #[inline]
    pub fn mul_pow2(self, b: f64) -> Self {
        Self {
            hi: self.hi * b,
            lo: self.lo * b,
        }
    }

    #[inline]
    pub fn sqr(self) -> Self {
        let (p1, mut p2) = two_prod(self.hi, self.hi);
        p2 += 2.0 * self.hi * self.lo;
        p2 += self.lo * self.lo;
        Self::from_quick(p1, p2)
    }

    /// Two correction steps on top of the binary64 quotient.
    fn divide(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let mut r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        r -= b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        Self::from_quick(q1, q2).add_f64(q3)
    }

    /// Square root by two Newton steps on `1/sqrt(a)` seeded in binary64.
    fn square_root(self) -> Self {
        if self.hi == 0.0 {
            return Self::ZERO;
        }
        if self.hi < 0.0 {
            return Self::from(f64::NAN);
        }
        let mut x = Self::from(1.0 / fsqrt(self.hi));
        let h = self.mul_pow2(0.5);
        for _ in 0..2 {
            let t = Self::from(0.5) - h * x.sqr();
            x += x * t;
        }
        self * x
    }

    pub fn is_nan(self) -> bool {
        self.hi.is_nan() || self.lo.is_nan()
    }
}

impl From<f64> for DoubleDouble {
    #[inline]
    fn from(hi: f64) -> Self {
        Self { hi, lo: 0.0 }
    }
}

impl From<i32> for DoubleDouble {
    fn from(v: i32) -> Self {
        Self::from(v as f64)
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s1, mut s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        s2 += t1;
        let (s1, mut s2) = quick_two_sum(s1, s2);
        s2 += t2;
        Self::from_quick(s1, s2)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p1, mut p2) = two_prod(self.hi, b.hi);
        p2 += self.hi * b.lo + self.lo * b.hi;
        Self::from_quick(p1, p2)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, b: Self) -> Self {
        self.divide(b)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl AddAssign for DoubleDouble {
    #[inline]
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl SubAssign for DoubleDouble {
    #[inline]
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl MulAssign for DoubleDouble {
    #[inline]
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

impl DivAssign for DoubleDouble {
    #[inline]
    fn div_assign(&mut self, b: Self) {
        *self = *self / b;
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(Precision::DD.display_digits()))
    }
}

impl Scalar for DoubleDouble {
    type Real = Self;
    type Wider = QuadDouble;
    const IS_COMPLEX: bool = false;

    #[inline]
    fn zero() -> Self {
        Self::ZERO
    }
    #[inline]
    fn one() -> Self {
        Self::ONE
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        Self::from(x)
    }
    #[inline]
    fn from_real(r: Self) -> Self {
        r
    }
    fn from_parts(re: Self, im: Self) -> Result<Self, XprecError> {
        if im != Self::ZERO {
            return Err(XprecError::NotReal);
        }
        Ok(re)
    }
    #[inline]
    fn re(self) -> Self {
        self
    }
    #[inline]
    fn im(self) -> Self {
        Self::ZERO
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn abs_sqr(self) -> Self {
        self.sqr()
    }
    #[inline]
    fn modulus(self) -> Self {
        RealScalar::abs(self)
    }
    #[inline]
    fn scale(self, r: Self) -> Self {
        self * r
    }
    #[inline]
    fn div_real(self, r: Self) -> Self {
        self / r
    }
    fn widen(self) -> QuadDouble {
        QuadDouble::from_components(&[self.hi, self.lo])
    }
    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}

impl RealScalar for DoubleDouble {
    type WiderReal = QuadDouble;
    const PRECISION: Precision = Precision::DD;
    const COMPONENTS: usize = 2;

    #[inline]
    fn to_f64(self) -> f64 {
        self.hi
    }
    fn widen_real(self) -> QuadDouble {
        self.widen()
    }
    fn sqrt(self) -> Self {
        self.square_root()
    }
    #[inline]
    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
    fn components(self) -> [f64; 4] {
        [self.hi, self.lo, 0.0, 0.0]
    }
    fn from_components(parts: &[f64]) -> Self {
        let mut acc = Self::ZERO;
        for &p in parts {
            acc = acc.add_f64(p);
        }
        acc
    }
    fn to_canonical(self) -> String {
        super::decimal::format_round_trip(&[self.hi, self.lo], 32)
    }
}
