use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use super::eft::{quick_two_sum, three_sum, three_sum2, two_prod, two_sum};
use super::{fsqrt, DoubleDouble, Precision, RealScalar, Scalar, XprecError};

/// Quad-double number: four non-overlapping binary64 components of
/// decreasing magnitude. Every arithmetic result is renormalized.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct QuadDouble(pub [f64; 4]);

impl QuadDouble {
    pub const ZERO: Self = Self([0.0; 4]);
    pub const ONE: Self = Self([1.0, 0.0, 0.0, 0.0]);

    /// Renormalizes four arbitrary components.
    pub fn new(c0: f64, c1: f64, c2: f64, c3: f64) -> Self {
        Self::from_components(&[c0, c1, c2, c3])
    }

    pub fn lead(self) -> f64 {
        self.0[0]
    }

    pub fn add_f64(self, b: f64) -> Self {
        let a = self.0;
        let (c0, e) = two_sum(a[0], b);
        let (c1, e) = two_sum(a[1], e);
        let (c2, e) = two_sum(a[2], e);
        let (c3, e) = two_sum(a[3], e);
        renorm5(c0, c1, c2, c3, e)
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let a = self.0;
        let (p0, q0) = two_prod(a[0], b);
        let (p1, mut q1) = two_prod(a[1], b);
        let (mut p2, mut q2) = two_prod(a[2], b);
        let p3 = a[3] * b;

        let s0 = p0;
        let (s1, mut s2) = two_sum(q0, p1);
        three_sum(&mut s2, &mut q1, &mut p2);
        three_sum2(&mut q1, &mut q2, p3);
        let s3 = q1;
        let s4 = q2 + p2;
        renorm5(s0, s1, s2, s3, s4)
    }

    /// Exact multiplication by a power of two.
    pub fn mul_pow2(self, b: f64) -> Self {
        let a = self.0;
        Self([a[0] * b, a[1] * b, a[2] * b, a[3] * b])
    }

    fn add_accurate(a: Self, b: Self) -> Self {
        let (a, b) = (a.0, b.0);
        let mut x = [0.0f64; 4];
        let (mut i, mut j, mut k) = (0usize, 0usize, 0usize);

        let mut u = if a[i].abs() > b[j].abs() {
            i += 1;
            a[i - 1]
        } else {
            j += 1;
            b[j - 1]
        };
        let mut v = if a[i].abs() > b[j].abs() {
            i += 1;
            a[i - 1]
        } else {
            j += 1;
            b[j - 1]
        };
        (u, v) = quick_two_sum(u, v);

        while k < 4 {
            if i >= 4 && j >= 4 {
                x[k] = u;
                if k < 3 {
                    k += 1;
                    x[k] = v;
                }
                break;
            }
            let t = if i >= 4 {
                j += 1;
                b[j - 1]
            } else if j >= 4 || a[i].abs() > b[j].abs() {
                i += 1;
                a[i - 1]
            } else {
                j += 1;
                b[j - 1]
            };
            let s = quick_three_accum(&mut u, &mut v, t);
            if s != 0.0 {
                x[k] = s;
                k += 1;
            }
        }
        for &ak in &a[i..] {
            x[3] += ak;
        }
        for &bk in &b[j..] {
            x[3] += bk;
        }
        renorm4(x[0], x[1], x[2], x[3])
    }

    fn mul_accurate(a: Self, b: Self) -> Self {
        let (a, b) = (a.0, b.0);
        let (p0, mut q0) = two_prod(a[0], b[0]);

        let (mut p1, mut q1) = two_prod(a[0], b[1]);
        let (mut p2, mut q2) = two_prod(a[1], b[0]);

        let (mut p3, mut q3) = two_prod(a[0], b[2]);
        let (mut p4, mut q4) = two_prod(a[1], b[1]);
        let (mut p5, mut q5) = two_prod(a[2], b[0]);

        // order eps terms
        three_sum(&mut p1, &mut p2, &mut q0);

        // six-three sum of p2, q1, q2, p3, p4, p5
        three_sum(&mut p2, &mut q1, &mut q2);
        three_sum(&mut p3, &mut p4, &mut p5);
        let (s0, t0) = two_sum(p2, p3);
        let (s1, t1) = two_sum(q1, p4);
        let mut s2 = q2 + p5;
        let (s1, t0) = two_sum(s1, t0);
        s2 += t0 + t1;

        // order eps^3 terms
        let (mut p6, q6) = two_prod(a[0], b[3]);
        let (mut p7, q7) = two_prod(a[1], b[2]);
        let (mut p8, q8) = two_prod(a[2], b[1]);
        let (mut p9, q9) = two_prod(a[3], b[0]);

        // nine-two sum of q0, s1, q3, q4, q5, p6, p7, p8, p9
        (q0, q3) = two_sum(q0, q3);
        (q4, q5) = two_sum(q4, q5);
        (p6, p7) = two_sum(p6, p7);
        (p8, p9) = two_sum(p8, p9);
        let (t0, mut t1) = two_sum(q0, q4);
        t1 += q3 + q5;
        let (r0, mut r1) = two_sum(p6, p8);
        r1 += p7 + p9;
        let (q3, mut q4) = two_sum(t0, r0);
        q4 += t1 + r1;
        let (t0, mut t1) = two_sum(q3, s1);
        t1 += q4;

        // order eps^4 terms
        t1 += a[1] * b[3] + a[2] * b[2] + a[3] * b[1] + q6 + q7 + q8 + q9 + s2;

        renorm5(p0, p1, s0, t0, t1)
    }

    /// Binary64 seed followed by three correction steps, each removing the
    /// residual `a - b*q` at full precision.
    fn divide(a: Self, b: Self) -> Self {
        let d = b.0[0];
        let q0 = a.0[0] / d;
        let mut r = a - b.mul_f64(q0);
        let q1 = r.0[0] / d;
        r -= b.mul_f64(q1);
        let q2 = r.0[0] / d;
        r -= b.mul_f64(q2);
        let q3 = r.0[0] / d;
        renorm4(q0, q1, q2, q3)
    }

    /// Three Newton steps on `1/sqrt(a)` seeded in binary64.
    fn square_root(self) -> Self {
        let a0 = self.0[0];
        if a0 == 0.0 {
            return Self::ZERO;
        }
        if a0 < 0.0 {
            return Self::from(f64::NAN);
        }
        let mut x = Self::from(1.0 / fsqrt(a0));
        let h = self.mul_pow2(0.5);
        let half = Self::from(0.5);
        for _ in 0..3 {
            let t = half - h * (x * x);
            x += x * t;
        }
        self * x
    }

    pub fn is_nan(self) -> bool {
        self.0.iter().any(|c| c.is_nan())
    }
}

#[inline]
fn quick_three_accum(a: &mut f64, b: &mut f64, c: f64) -> f64 {
    let (s, bb) = two_sum(*b, c);
    let (s, aa) = two_sum(*a, s);
    *a = aa;
    *b = bb;
    let za = *a != 0.0;
    let zb = *b != 0.0;
    if za && zb {
        return s;
    }
    if !zb {
        *b = *a;
        *a = s;
    } else {
        *a = s;
    }
    0.0
}

pub(crate) fn renorm4(mut c0: f64, mut c1: f64, mut c2: f64, mut c3: f64) -> QuadDouble {
    if c0.is_infinite() {
        return QuadDouble([c0, c1, c2, c3]);
    }
    let (s, t) = quick_two_sum(c2, c3);
    c3 = t;
    let (s, t) = quick_two_sum(c1, s);
    c2 = t;
    let (s, t) = quick_two_sum(c0, s);
    c0 = s;
    c1 = t;

    let (mut s0, mut s1) = (c0, c1);
    let (mut s2, mut s3) = (0.0, 0.0);
    if s1 != 0.0 {
        (s1, s2) = quick_two_sum(s1, c2);
        if s2 != 0.0 {
            (s2, s3) = quick_two_sum(s2, c3);
        } else {
            (s1, s2) = quick_two_sum(s1, c3);
        }
    } else {
        (s0, s1) = quick_two_sum(s0, c2);
        if s1 != 0.0 {
            (s1, s2) = quick_two_sum(s1, c3);
        } else {
            (s0, s1) = quick_two_sum(s0, c3);
        }
    }
    QuadDouble([s0, s1, s2, s3])
}

pub(crate) fn renorm5(mut c0: f64, mut c1: f64, mut c2: f64, mut c3: f64, mut c4: f64) -> QuadDouble {
    if c0.is_infinite() {
        return QuadDouble([c0, c1, c2, c3]);
    }
    let (s, t) = quick_two_sum(c3, c4);
    c4 = t;
    let (s, t) = quick_two_sum(c2, s);
    c3 = t;
    let (s, t) = quick_two_sum(c1, s);
    c2 = t;
    let (s, t) = quick_two_sum(c0, s);
    c0 = s;
    c1 = t;

    let (mut s0, mut s1) = (c0, c1);
    let (mut s2, mut s3) = (0.0, 0.0);
    if s1 != 0.0 {
        (s1, s2) = quick_two_sum(s1, c2);
        if s2 != 0.0 {
            (s2, s3) = quick_two_sum(s2, c3);
            if s3 != 0.0 {
                s3 += c4;
            } else {
                (s2, s3) = quick_two_sum(s2, c4);
            }
        } else {
            (s1, s2) = quick_two_sum(s1, c3);
            if s2 != 0.0 {
                (s2, s3) = quick_two_sum(s2, c4);
            } else {
                (s1, s2) = quick_two_sum(s1, c4);
            }
        }
    } else {
        (s0, s1) = quick_two_sum(s0, c2);
        if s1 != 0.0 {
            (s1, s2) = quick_two_sum(s1, c3);
            if s2 != 0.0 {
                (s2, s3) = quick_two_sum(s2, c4);
            } else {
                (s1, s2) = quick_two_sum(s1, c4);
            }
        } else {
            (s0, s1) = quick_two_sum(s0, c3);
            if s1 != 0.0 {
                (s1, s2) = quick_two_sum(s1, c4);
            } else {
                (s0, s1) = quick_two_sum(s0, c4);
            }
        }
    }
    QuadDouble([s0, s1, s2, s3])
}

impl From<f64> for QuadDouble {
    #[inline]
    fn from(x: f64) -> Self {
        Self([x, 0.0, 0.0, 0.0])
    }
}

impl From<DoubleDouble> for QuadDouble {
    fn from(x: DoubleDouble) -> Self {
        Self([x.hi, x.lo, 0.0, 0.0])
    }
}

impl Add for QuadDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        Self::add_accurate(self, b)
    }
}

impl Sub for QuadDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        Self::add_accurate(self, -b)
    }
}

impl Mul for QuadDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        Self::mul_accurate(self, b)
    }
}

impl Div for QuadDouble {
    type Output = Self;
    #[inline]
    fn div(self, b: Self) -> Self {
        Self::divide(self, b)
    }
}

impl Neg for QuadDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        let a = self.0;
        Self([-a[0], -a[1], -a[2], -a[3]])
    }
}

impl AddAssign for QuadDouble {
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl SubAssign for QuadDouble {
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl MulAssign for QuadDouble {
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

impl DivAssign for QuadDouble {
    fn div_assign(&mut self, b: Self) {
        *self = *self / b;
    }
}

impl PartialOrd for QuadDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            match a.partial_cmp(b)? {
                Ordering::Equal => continue,
                ord => return Some(ord),
            }
        }
        Some(Ordering::Equal)
    }
}

impl fmt::Debug for QuadDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.0;
        write!(f, "QuadDouble({:e}, {:e}, {:e}, {:e})", a[0], a[1], a[2], a[3])
    }
}

impl fmt::Display for QuadDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(Precision::QD.display_digits()))
    }
}

impl Scalar for QuadDouble {
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
        self * self
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
    fn widen(self) -> Self {
        self
    }
    fn is_finite(self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl RealScalar for QuadDouble {
    type WiderReal = QuadDouble;
    const PRECISION: Precision = Precision::QD;
    const COMPONENTS: usize = 4;

    #[inline]
    fn to_f64(self) -> f64 {
        self.0[0]
    }
    fn widen_real(self) -> Self {
        self
    }
    fn sqrt(self) -> Self {
        self.square_root()
    }
    #[inline]
    fn abs(self) -> Self {
        if self.0[0] < 0.0 {
            -self
        } else {
            self
        }
    }
    fn components(self) -> [f64; 4] {
        self.0
    }
    fn from_components(parts: &[f64]) -> Self {
        let mut acc = Self::ZERO;
        for &p in parts {
            acc = acc.add_f64(p);
        }
        acc
    }
    fn to_canonical(self) -> String {
        super::decimal::format_round_trip(&self.0, 64)
    }
}
