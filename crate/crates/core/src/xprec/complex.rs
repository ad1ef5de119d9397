use core::fmt;
use core::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use super::{RealScalar, Scalar, XprecError};

/// Complex number over any real scalar type.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct Complex<R> {
    pub re: R,
    pub im: R,
}

impl<R: RealScalar> Complex<R> {
    #[inline]
    pub fn new(re: R, im: R) -> Self {
        Self { re, im }
    }

    pub fn i() -> Self {
        Self::new(R::zero(), R::one())
    }
}

impl<R: RealScalar> Add for Complex<R> {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        Self::new(self.re + b.re, self.im + b.im)
    }
}

impl<R: RealScalar> Sub for Complex<R> {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        Self::new(self.re - b.re, self.im - b.im)
    }
}

impl<R: RealScalar> Mul for Complex<R> {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        Self::new(
            self.re * b.re - self.im * b.im,
            self.re * b.im + self.im * b.re,
        )
    }
}

impl<R: RealScalar> Div for Complex<R> {
    type Output = Self;
    /// `a * conj(b) / |b|^2`; a zero divisor yields non-finite parts.
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, b: Self) -> Self {
        let den = b.abs_sqr();
        (self * b.conj()).div_real(den)
    }
}

impl<R: RealScalar> Neg for Complex<R> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl<R: RealScalar> AddAssign for Complex<R> {
    #[inline]
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl<R: RealScalar> SubAssign for Complex<R> {
    #[inline]
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl<R: RealScalar> MulAssign for Complex<R> {
    #[inline]
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

impl<R: RealScalar> DivAssign for Complex<R> {
    #[inline]
    fn div_assign(&mut self, b: Self) {
        *self = *self / b;
    }
}

impl<R: RealScalar> fmt::Debug for Complex<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex({:?}, {:?})", self.re, self.im)
    }
}

impl<R: RealScalar> fmt::Display for Complex<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.re, self.im)
    }
}

impl<R: RealScalar> Scalar for Complex<R> {
    type Real = R;
    type Wider = Complex<R::WiderReal>;
    const IS_COMPLEX: bool = true;

    #[inline]
    fn zero() -> Self {
        Self::new(R::zero(), R::zero())
    }
    #[inline]
    fn one() -> Self {
        Self::new(R::one(), R::zero())
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        Self::new(R::from_f64(x), R::zero())
    }
    #[inline]
    fn from_real(r: R) -> Self {
        Self::new(r, R::zero())
    }
    fn from_parts(re: R, im: R) -> Result<Self, XprecError> {
        Ok(Self::new(re, im))
    }
    #[inline]
    fn re(self) -> R {
        self.re
    }
    #[inline]
    fn im(self) -> R {
        self.im
    }
    #[inline]
    fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }
    #[inline]
    fn abs_sqr(self) -> R {
        self.re * self.re + self.im * self.im
    }
    fn modulus(self) -> R {
        // scaled to keep the squares in range
        let a = self.re.abs();
        let b = self.im.abs();
        let big = a.max(b);
        if big == R::zero() {
            return R::zero();
        }
        let (x, y) = (a / big, b / big);
        big * (x * x + y * y).sqrt()
    }
    #[inline]
    fn scale(self, r: R) -> Self {
        Self::new(self.re * r, self.im * r)
    }
    #[inline]
    fn div_real(self, r: R) -> Self {
        Self::new(self.re / r, self.im / r)
    }
    fn widen(self) -> Self::Wider {
        Complex::new(self.re.widen_real(), self.im.widen_real())
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xprec::{DoubleDouble, Precision, QuadDouble};

    type C = Complex<DoubleDouble>;

    #[test]
    fn i_squared_is_minus_one() {
        let i = C::i();
        assert_eq!(i * i, -C::one());
        let iq = Complex::<QuadDouble>::i();
        assert_eq!(iq * iq, -Complex::<QuadDouble>::one());
    }

    #[test]
    fn conj_times_self_is_real() {
        let a = C::new(DoubleDouble::from(0.3), DoubleDouble::from(-1.7));
        let p = a.conj() * a;
        assert!(p.im.to_f64().abs() <= Precision::DD.eps());
        assert_eq!(p.re, a.abs_sqr());
        assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn modulus_basics() {
        let z = Complex::<f64>::new(3.0, 4.0);
        assert_eq!(z.modulus(), 5.0);
        assert_eq!(Complex::<f64>::zero().modulus(), 0.0);
        assert!(Complex::<f64>::new(0.0, -2.0).modulus() > 0.0);
    }
}
