//! Extended-precision scalars.
//!
//! Double-double and quad-double numbers are unevaluated sums of two and
//! four binary64 values. [`Complex`] pairs any of the real types. All
//! numerical code in the crate is generic over [`Scalar`], so one code path
//! serves the six precision levels {D, DD, QD} x {real, complex}.

mod accum;
mod complex;
mod dd;
mod decimal;
pub mod eft;
mod qd;

use alloc::string::String;
use core::fmt::{Debug, Display};
use core::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

pub use accum::{ExactSum, SuperAccumulator};
pub use complex::Complex;
pub use dd::DoubleDouble;
pub use eft::{quick_two_sum, two_prod, two_sum};
pub use qd::QuadDouble;

/// Errors raised by the checked scalar operations and by decimal parsing.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum XprecError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative number")]
    NegativeSqrt,
    #[error("invalid decimal literal `{0}`")]
    InvalidLiteral(String),
    #[error("decimal literal `{0}` is out of range")]
    OutOfRange(String),
    #[error("imaginary part given for a real scalar")]
    NotReal,
}

/// Working precision of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    /// binary64
    D,
    /// double-double
    DD,
    /// quad-double
    QD,
}

impl Precision {
    /// Unit roundoff: 2^-53, 2^-104 and 2^-209.
    pub const fn eps(self) -> f64 {
        match self {
            Precision::D => eft_pow2_const(53),
            Precision::DD => eft_pow2_const(104),
            Precision::QD => eft_pow2_const(209),
        }
    }

    /// Significant decimal digits used when rendering a value.
    pub const fn display_digits(self) -> usize {
        match self {
            Precision::D => 17,
            Precision::DD => 32,
            Precision::QD => 64,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Precision::D => "d",
            Precision::DD => "dd",
            Precision::QD => "qd",
        }
    }
}

const fn eft_pow2_const(neg_exp: u64) -> f64 {
    f64::from_bits((1023 - neg_exp) << 52)
}

/// Precision together with the real/complex choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionLevel {
    pub precision: Precision,
    pub complex: bool,
}

impl PrecisionLevel {
    pub const fn eps(self) -> f64 {
        self.precision.eps()
    }
}

impl Display for PrecisionLevel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let kind = if self.complex { "complex" } else { "real" };
        write!(f, "{} {}", kind, self.precision.name())
    }
}

/// Field operations shared by every real and complex scalar type.
pub trait Scalar:
    Copy
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    type Real: RealScalar;
    /// The same kind of scalar one precision level up (quad-double maps to
    /// itself).
    type Wider: Scalar<Real = <Self::Real as RealScalar>::WiderReal>;

    const IS_COMPLEX: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_real(r: Self::Real) -> Self;
    /// Builds a scalar from real and imaginary parts. Real types reject a
    /// nonzero imaginary part.
    fn from_parts(re: Self::Real, im: Self::Real) -> Result<Self, XprecError>;
    fn re(self) -> Self::Real;
    fn im(self) -> Self::Real;
    fn conj(self) -> Self;
    /// `re^2 + im^2`.
    fn abs_sqr(self) -> Self::Real;
    /// `|z|`.
    fn modulus(self) -> Self::Real;
    fn scale(self, r: Self::Real) -> Self;
    fn div_real(self, r: Self::Real) -> Self;
    fn widen(self) -> Self::Wider;
    fn is_finite(self) -> bool;

    fn is_zero(self) -> bool {
        self == Self::zero()
    }

    fn level() -> PrecisionLevel {
        PrecisionLevel {
            precision: Self::Real::PRECISION,
            complex: Self::IS_COMPLEX,
        }
    }

    fn eps() -> f64 {
        Self::Real::PRECISION.eps()
    }

    /// Division that reports a zero divisor instead of producing NaN.
    fn try_div(self, rhs: Self) -> Result<Self, XprecError> {
        if rhs.is_zero() {
            Err(XprecError::DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }
}

/// Real scalars: ordered, with square roots, exact decomposition into
/// binary64 components, and decimal conversion.
pub trait RealScalar: Scalar<Real = Self> + PartialOrd {
    type WiderReal: RealScalar;
    const PRECISION: Precision;
    /// Number of binary64 components in the representation.
    const COMPONENTS: usize;

    fn to_f64(self) -> f64;
    fn widen_real(self) -> Self::WiderReal;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;

    /// Components, leading first; unused trailing slots are zero.
    fn components(self) -> [f64; 4];
    /// Rounds the exact sum of `parts` to this precision.
    fn from_components(parts: &[f64]) -> Self;

    /// Rounds the accumulator's exact value, greedily one component at a
    /// time.
    fn from_accumulator(acc: &SuperAccumulator) -> Self {
        let parts = acc.round_components(Self::COMPONENTS);
        Self::from_components(&parts[..Self::COMPONENTS])
    }

    fn try_sqrt(self) -> Result<Self, XprecError> {
        if self < Self::zero() {
            Err(XprecError::NegativeSqrt)
        } else {
            Ok(self.sqrt())
        }
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Correctly rounded decimal with `digits` significant digits, in the
    /// style of `{:e}` (`-1.25e-3`, trailing zeros trimmed).
    fn to_decimal(self, digits: usize) -> String {
        decimal::format_components(&self.components()[..Self::COMPONENTS], digits)
    }

    /// Shortest decimal text, no shorter than the display form, that
    /// [`RealScalar::parse_decimal`] maps back to the same value.
    fn to_canonical(self) -> String;

    /// Parses a decimal literal, rounding its exact value component by
    /// component.
    fn parse_decimal(text: &str) -> Result<Self, XprecError> {
        let parts = decimal::parse_components(text, Self::COMPONENTS)?;
        Ok(Self::from_components(&parts[..Self::COMPONENTS]))
    }
}

#[cfg(feature = "std")]
#[inline(always)]
pub(crate) fn fsqrt(x: f64) -> f64 {
    x.sqrt()
}

#[cfg(not(feature = "std"))]
#[inline(always)]
pub(crate) fn fsqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

impl Scalar for f64 {
    type Real = f64;
    type Wider = DoubleDouble;
    const IS_COMPLEX: bool = false;

    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn one() -> Self {
        1.0
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn from_real(r: f64) -> Self {
        r
    }
    fn from_parts(re: f64, im: f64) -> Result<Self, XprecError> {
        if im != 0.0 {
            return Err(XprecError::NotReal);
        }
        Ok(re)
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
    #[inline]
    fn im(self) -> f64 {
        0.0
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn abs_sqr(self) -> f64 {
        self * self
    }
    #[inline]
    fn modulus(self) -> f64 {
        RealScalar::abs(self)
    }
    #[inline]
    fn scale(self, r: f64) -> Self {
        self * r
    }
    #[inline]
    fn div_real(self, r: f64) -> Self {
        self / r
    }
    fn widen(self) -> DoubleDouble {
        DoubleDouble::from(self)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl RealScalar for f64 {
    type WiderReal = DoubleDouble;
    const PRECISION: Precision = Precision::D;
    const COMPONENTS: usize = 1;

    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    fn widen_real(self) -> DoubleDouble {
        DoubleDouble::from(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        fsqrt(self)
    }
    #[inline]
    fn abs(self) -> Self {
        f64::from_bits(self.to_bits() & !(1u64 << 63))
    }
    fn components(self) -> [f64; 4] {
        [self, 0.0, 0.0, 0.0]
    }
    fn from_components(parts: &[f64]) -> Self {
        parts.iter().fold(0.0, |acc, &p| acc + p)
    }
    fn to_canonical(self) -> String {
        alloc::format!("{:e}", self)
    }
    fn parse_decimal(text: &str) -> Result<Self, XprecError> {
        decimal::validate_literal(text)?;
        text.trim()
            .parse::<f64>()
            .map_err(|_| XprecError::InvalidLiteral(text.into()))
            .and_then(|v| {
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(XprecError::OutOfRange(text.into()))
                }
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_roundoffs() {
        assert_eq!(Precision::D.eps(), f64::EPSILON / 2.0);
        assert_eq!(Precision::DD.eps(), eft::pow2(-104));
        assert_eq!(Precision::QD.eps(), eft::pow2(-209));
    }

    #[test]
    fn checked_ops_report_domain_errors() {
        assert_eq!(1.0f64.try_div(0.0), Err(XprecError::DivisionByZero));
        assert_eq!((-1.0f64).try_sqrt(), Err(XprecError::NegativeSqrt));
        assert_eq!(
            DoubleDouble::from(2.0).try_div(DoubleDouble::zero()),
            Err(XprecError::DivisionByZero)
        );
        assert_eq!(
            QuadDouble::from(-2.0).try_sqrt(),
            Err(XprecError::NegativeSqrt)
        );
        let z = Complex::<DoubleDouble>::one();
        assert_eq!(z.try_div(Complex::zero()), Err(XprecError::DivisionByZero));
    }

    #[test]
    fn f64_literals() {
        assert_eq!(f64::parse_decimal("0.515625").unwrap(), 33.0 / 64.0);
        assert!(f64::parse_decimal("1e999").is_err());
        assert!(f64::parse_decimal("inf").is_err());
        assert_eq!(0.1f64.to_canonical(), "1e-1");
    }
}
