//! Order-independent exact summation.
//!
//! [`SuperAccumulator`] is a fixed-point integer wide enough to hold any
//! finite binary64 exactly. Sums are therefore independent of the order and
//! grouping of the addends, and rounding the total happens once, at the
//! end. [`ExactSum`] lifts this to real and complex [`Scalar`]s.

use super::eft::pow2;
use super::{RealScalar, Scalar};

const LIMBS: usize = 70;
/// Weight of bit 0 of limb 0 is `2^BASE_EXP`.
const BASE_EXP: i32 = -1088;
/// Bit index (from the accumulator's bit 0) of `2^-1074`.
const FIRST_BIT: i64 = (-1074 - BASE_EXP) as i64;
const DIGIT_MASK: i64 = 0xffff_ffff;
/// Each addition moves a limb by less than 2^32; normalizing before 2^30
/// pending additions keeps every limb inside an i64.
const NORMALIZE_AFTER: u32 = 1 << 30;

/// Exact accumulator of binary64 values.
///
/// Limbs hold 32-bit digits in signed 64-bit words so that carries can be
/// deferred. Non-finite inputs are tracked separately and poison the result.
#[derive(Clone)]
pub struct SuperAccumulator {
    limbs: [i64; LIMBS],
    /// Touched limb range `[lo, hi)`.
    lo: usize,
    hi: usize,
    pending: u32,
    special: f64,
}

impl Default for SuperAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl core::fmt::Debug for SuperAccumulator {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let parts = self.round_components(4);
        write!(f, "SuperAccumulator({:e} + {:e} + ...)", parts[0], parts[1])
    }
}

impl SuperAccumulator {
    pub const fn new() -> Self {
        Self {
            limbs: [0; LIMBS],
            lo: LIMBS,
            hi: 0,
            pending: 0,
            special: 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.special == 0.0 && self.limbs[self.lo.min(LIMBS)..self.hi].iter().all(|&l| l == 0)
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        self.add_signed(x, false);
    }

    #[inline]
    pub fn sub(&mut self, x: f64) {
        self.add_signed(x, true);
    }

    #[inline]
    fn add_signed(&mut self, x: f64, negate: bool) {
        if x == 0.0 {
            return;
        }
        if !x.is_finite() {
            self.special += if negate { -x } else { x };
            return;
        }
        let bits = x.to_bits();
        let neg = (bits >> 63 == 1) != negate;
        let be = ((bits >> 52) & 0x7ff) as i32;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if be == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), be - 1075)
        };
        let pos = (e - BASE_EXP) as u32;
        let li = (pos / 32) as usize;
        let v = (mant as u128) << (pos % 32);
        let d0 = (v as i64) & DIGIT_MASK;
        let d1 = ((v >> 32) as i64) & DIGIT_MASK;
        let d2 = (v >> 64) as i64;
        if neg {
            self.limbs[li] -= d0;
            self.limbs[li + 1] -= d1;
            self.limbs[li + 2] -= d2;
        } else {
            self.limbs[li] += d0;
            self.limbs[li + 1] += d1;
            self.limbs[li + 2] += d2;
        }
        self.lo = self.lo.min(li);
        self.hi = self.hi.max(li + 3);
        self.pending += 1;
        if self.pending >= NORMALIZE_AFTER {
            self.normalize();
        }
    }

    /// Adds the exact value of another accumulator.
    pub fn merge(&mut self, other: &Self) {
        if other.lo >= other.hi {
            self.special += other.special;
            return;
        }
        if self.pending + other.pending >= NORMALIZE_AFTER {
            self.normalize();
        }
        for i in other.lo..other.hi {
            self.limbs[i] += other.limbs[i];
        }
        self.lo = self.lo.min(other.lo);
        self.hi = self.hi.max(other.hi);
        self.pending += other.pending.max(1);
        self.special += other.special;
    }

    /// Propagates carries so that every touched limb except the top one is
    /// a digit in `[0, 2^32)`; the top limb carries the sign.
    fn normalize(&mut self) {
        if self.lo >= self.hi {
            self.pending = 0;
            return;
        }
        for i in self.lo..self.hi - 1 {
            let c = self.limbs[i] >> 32;
            self.limbs[i] -= c << 32;
            self.limbs[i + 1] += c;
        }
        while self.limbs[self.hi - 1] >> 32 != 0 && self.limbs[self.hi - 1] >> 32 != -1
            || (self.limbs[self.hi - 1] >> 31 != 0 && self.limbs[self.hi - 1] >> 31 != -1)
        {
            let top = self.hi - 1;
            let c = self.limbs[top] >> 32;
            self.limbs[top] -= c << 32;
            self.limbs[top + 1] += c;
            self.hi += 1;
        }
        while self.hi > self.lo && self.limbs[self.hi - 1] == 0 {
            self.hi -= 1;
        }
        while self.lo < self.hi && self.limbs[self.lo] == 0 {
            self.lo += 1;
        }
        if self.lo >= self.hi {
            self.lo = LIMBS;
            self.hi = 0;
        }
        self.pending = 0;
    }

    /// Nearest binary64 to the exact value (ties to even).
    pub fn round_f64(&self) -> f64 {
        let mut work = self.clone();
        work.round_in_place()
    }

    fn round_in_place(&mut self) -> f64 {
        if self.special != 0.0 || self.special.is_nan() {
            return self.special;
        }
        self.normalize();
        if self.lo >= self.hi {
            return 0.0;
        }
        let neg = self.limbs[self.hi - 1] < 0;
        // magnitude digits, all in [0, 2^32)
        let mut mag = [0u64; LIMBS + 1];
        let (lo, hi) = (self.lo, self.hi);
        if neg {
            let mut borrow = 0i64;
            for (m, &limb) in mag[lo..hi].iter_mut().zip(&self.limbs[lo..hi]) {
                let mut d = -limb - borrow;
                borrow = 0;
                if d < 0 {
                    d += 1 << 32;
                    borrow = 1;
                }
                *m = d as u64;
            }
        } else {
            for (m, &limb) in mag[lo..hi].iter_mut().zip(&self.limbs[lo..hi]) {
                *m = limb as u64;
            }
        }
        let Some(top) = (lo..hi).rev().find(|&i| mag[i] != 0) else {
            return 0.0;
        };
        let top_bit = top as i64 * 32 + 63 - mag[top].leading_zeros() as i64;
        let lsb = (top_bit - 52).max(FIRST_BIT);
        let mut mant = extract_bits(&mag, lsb, (top_bit - lsb + 1) as u32);
        if lsb > 0 {
            let round_bit = extract_bits(&mag, lsb - 1, 1) == 1;
            let sticky = any_bits_below(&mag, lo, lsb - 1);
            if round_bit && (sticky || mant & 1 == 1) {
                mant += 1;
            }
        }
        let exp = lsb as i32 + BASE_EXP;
        if exp > 971 {
            return if neg { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        let v = mant as f64 * pow2(exp);
        if neg {
            -v
        } else {
            v
        }
    }

    /// Greedy rounding into up to four components: each one is the nearest
    /// binary64 to what the previous ones left over.
    pub fn round_components(&self, n: usize) -> [f64; 4] {
        let mut out = [0.0; 4];
        let mut work = self.clone();
        for slot in out.iter_mut().take(n.min(4)) {
            let c = work.round_in_place();
            *slot = c;
            if c == 0.0 || !c.is_finite() {
                break;
            }
            work.sub(c);
        }
        out
    }
}

fn extract_bits(mag: &[u64; LIMBS + 1], from: i64, len: u32) -> u64 {
    debug_assert!(len <= 64);
    let li = (from / 32) as usize;
    let sh = (from % 32) as u32;
    let mut v: u128 = 0;
    for k in 0..3 {
        if li + k < mag.len() {
            v |= (mag[li + k] as u128) << (32 * k);
        }
    }
    let v = v >> sh;
    if len == 64 {
        v as u64
    } else {
        (v as u64) & ((1u64 << len) - 1)
    }
}

fn any_bits_below(mag: &[u64; LIMBS + 1], lo: usize, pos: i64) -> bool {
    if pos <= 0 {
        return false;
    }
    let li = (pos / 32) as usize;
    let sh = (pos % 32) as u32;
    if sh > 0 && mag[li] & ((1u64 << sh) - 1) != 0 {
        return true;
    }
    (lo..li).any(|i| mag[i] != 0)
}

/// Exact accumulator for [`Scalar`] values and products.
///
/// Products are rounded once to the working precision, in real arithmetic,
/// before being added exactly; the final value is rounded once more. The
/// result does not depend on the order of additions or on how partial sums
/// are merged.
#[derive(Clone, Debug, Default)]
pub struct ExactSum<S: Scalar> {
    re: SuperAccumulator,
    im: SuperAccumulator,
    _marker: core::marker::PhantomData<S>,
}

#[inline]
fn push<R: RealScalar>(acc: &mut SuperAccumulator, x: R, negate: bool) {
    for &c in &x.components()[..R::COMPONENTS] {
        acc.add_signed(c, negate);
    }
}

impl<S: Scalar> ExactSum<S> {
    pub fn new() -> Self {
        Self {
            re: SuperAccumulator::new(),
            im: SuperAccumulator::new(),
            _marker: core::marker::PhantomData,
        }
    }

    #[inline]
    pub fn add(&mut self, x: S) {
        push(&mut self.re, x.re(), false);
        if S::IS_COMPLEX {
            push(&mut self.im, x.im(), false);
        }
    }

    #[inline]
    pub fn sub(&mut self, x: S) {
        push(&mut self.re, x.re(), true);
        if S::IS_COMPLEX {
            push(&mut self.im, x.im(), true);
        }
    }

    #[inline]
    fn product(&mut self, a: S, b: S, negate: bool) {
        let (ar, br) = (a.re(), b.re());
        push(&mut self.re, ar * br, negate);
        if S::IS_COMPLEX {
            let (ai, bi) = (a.im(), b.im());
            push(&mut self.re, ai * bi, !negate);
            push(&mut self.im, ar * bi, negate);
            push(&mut self.im, ai * br, negate);
        }
    }

    /// Adds `a * b`.
    #[inline]
    pub fn add_product(&mut self, a: S, b: S) {
        self.product(a, b, false);
    }

    /// Subtracts `a * b`.
    #[inline]
    pub fn sub_product(&mut self, a: S, b: S) {
        self.product(a, b, true);
    }

    /// Adds `conj(a) * b`.
    #[inline]
    pub fn add_conj_product(&mut self, a: S, b: S) {
        self.product(a.conj(), b, false);
    }

    pub fn merge(&mut self, other: &Self) {
        self.re.merge(&other.re);
        if S::IS_COMPLEX {
            self.im.merge(&other.im);
        }
    }

    pub fn round(&self) -> S {
        let re = S::Real::from_accumulator(&self.re);
        if S::IS_COMPLEX {
            let im = S::Real::from_accumulator(&self.im);
            S::from_parts(re, im).unwrap_or_else(|_| S::from_real(re))
        } else {
            S::from_real(re)
        }
    }
}
