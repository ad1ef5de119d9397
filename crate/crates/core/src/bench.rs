//! Benchmark systems: the Chandrasekhar H-equation, cyclic n-roots, and
//! random products of variables.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mgs::Matrix;
use crate::polyrep::{Monomial, PolySystem};
use crate::xprec::{RealScalar, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BenchError {
    #[error("invalid benchmark parameter: {0}")]
    InvalidParameter(&'static str),
}

/// Dimension and constant `c` of the H-equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChandrasekharParams<R> {
    pub n: usize,
    pub c: R,
}

impl<R: RealScalar> ChandrasekharParams<R> {
    pub fn new(n: usize, c: R) -> Result<Self, BenchError> {
        if n == 0 {
            return Err(BenchError::InvalidParameter("n must be at least 1"));
        }
        if !(c > R::zero() && c <= R::one()) {
            return Err(BenchError::InvalidParameter("c must lie in (0, 1]"));
        }
        Ok(Self { n, c })
    }

    /// `c = 33/64`.
    pub fn with_default_c(n: usize) -> Result<Self, BenchError> {
        Self::new(n, R::from_f64(33.0 / 64.0))
    }
}

/// The discretized H-equation in variables `H_0 .. H_{n-1}`:
///
/// `f_i = 2n H_{i-1} - sum_{j=0}^{n-1} (c i / (i + j)) H_{i-1} H_j - 2n`
/// for `i = 1..n`. Each weight is one division at working precision.
pub fn chandrasekhar_system<S: Scalar>(p: &ChandrasekharParams<S::Real>) -> PolySystem<S> {
    let n = p.n;
    let two_n = S::from_f64(2.0 * n as f64);
    let polys = (1..=n)
        .map(|i| {
            let h = i - 1;
            let mut terms = Vec::with_capacity(n + 2);
            terms.push(Monomial::product_of(two_n, [h]).expect("valid"));
            let ci = p.c * S::Real::from_f64(i as f64);
            for j in 0..n {
                let w = ci / S::Real::from_f64((i + j) as f64);
                terms.push(Monomial::product_of(S::from_real(-w), [h, j]).expect("valid"));
            }
            terms.push(Monomial::constant(-two_n));
            terms
        })
        .collect();
    PolySystem::new(n, polys).expect("generated system is valid")
}

/// The start point `H = (1, ..., 1)`.
pub fn chandrasekhar_start<S: Scalar>(n: usize) -> Vec<S> {
    alloc::vec![S::one(); n]
}

/// Cyclic n-roots: for `i = 1..n-1` the sum over `j` of the products of
/// `i` cyclically consecutive variables starting at `x_j`, and
/// `x_0 ... x_{n-1} - 1`.
pub fn cyclic_n_roots<S: Scalar>(n: usize) -> Result<PolySystem<S>, BenchError> {
    if n < 2 {
        return Err(BenchError::InvalidParameter("cyclic n-roots needs n >= 2"));
    }
    let mut polys: Vec<Vec<Monomial<S>>> = (1..n)
        .map(|i| {
            (0..n)
                .map(|j| Monomial::product_of(S::one(), (j..j + i).map(|k| k % n)).expect("valid"))
                .collect()
        })
        .collect();
    polys.push(alloc::vec![
        Monomial::product_of(S::one(), 0..n).expect("valid"),
        Monomial::constant(-S::one()),
    ]);
    Ok(PolySystem::new(n, polys).expect("generated system is valid"))
}

/// `n^2 - n + 2`.
pub fn cyclic_monomial_count(n: usize) -> usize {
    n * n - n + 2
}

/// Uniform in `[lo, hi)`.
fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

/// Random point: on the unit circle for complex scalars, in `[-1, 1)` for
/// real ones.
pub fn random_point<S: Scalar>(n: usize, seed: u64) -> Vec<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            if S::IS_COMPLEX {
                let theta = uniform(&mut rng, 0.0, core::f64::consts::TAU);
                let re = S::Real::from_f64(libm::cos(theta));
                let im = S::Real::from_f64(libm::sin(theta));
                S::from_parts(re, im).expect("complex scalar")
            } else {
                S::from_f64(uniform(&mut rng, -1.0, 1.0))
            }
        })
        .collect()
}

/// `m x n` matrix with real and imaginary parts uniform in `[-1, 1)`,
/// filled column by column.
pub fn random_matrix<S: Scalar>(m: usize, n: usize, seed: u64) -> Matrix<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || S::Real::from_f64(uniform(&mut rng, -1.0, 1.0));
    let mut data = Vec::with_capacity(m * n);
    for _ in 0..m * n {
        let re = draw();
        let im = if S::IS_COMPLEX { draw() } else { S::Real::zero() };
        data.push(S::from_parts(re, im).expect("imaginary part is zero for real scalars"));
    }
    Matrix::from_fn(m, n, |i, j| data[j * m + i])
}

/// Uniform values in `[0.5, 2)` for stress evaluations.
pub fn random_factors<S: Scalar>(n: usize, seed: u64) -> Vec<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| S::from_f64(uniform(&mut rng, 0.5, 2.0))).collect()
}

/// `m` products of all `n` variables with coefficients uniform in
/// `[0.5, 2)`, produced lazily. Monomial `i` depends only on `seed` and
/// `i`.
#[derive(Debug, Clone)]
pub struct StressProducts<S> {
    m: usize,
    n: usize,
    seed: u64,
    next: usize,
    _marker: core::marker::PhantomData<S>,
}

pub fn random_stress_products<S: Scalar>(m: usize, n: usize, seed: u64) -> Result<StressProducts<S>, BenchError> {
    if m == 0 || n == 0 {
        return Err(BenchError::InvalidParameter("m and n must be at least 1"));
    }
    Ok(StressProducts {
        m,
        n,
        seed,
        next: 0,
        _marker: core::marker::PhantomData,
    })
}

impl<S: Scalar> StressProducts<S> {
    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn monomial(&self, i: usize) -> Monomial<S> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(i as u64);
        let c = S::from_f64(uniform(&mut rng, 0.5, 2.0));
        Monomial::product_of(c, 0..self.n).expect("valid")
    }
}

impl<S: Scalar> Iterator for StressProducts<S> {
    type Item = Monomial<S>;

    fn next(&mut self) -> Option<Monomial<S>> {
        if self.next >= self.m {
            return None;
        }
        let mon = self.monomial(self.next);
        self.next += 1;
        Some(mon)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.m - self.next;
        (left, Some(left))
    }
}

impl<S: Scalar> ExactSizeIterator for StressProducts<S> {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaldiff::evaluate_system;

    #[test]
    fn chandrasekhar_smallest() {
        let p = ChandrasekharParams::<f64>::with_default_c(1).unwrap();
        let sys = chandrasekhar_system::<f64>(&p);
        // 2H - c H^2 - 2
        let terms = &sys.polys()[0];
        assert_eq!(terms.len(), 3);
        assert_eq!(terms[0].coeff, -33.0 / 64.0);
        assert_eq!(terms[0].exponents(), &[(0, 2)]);
        assert_eq!(terms[1].coeff, 2.0);
        assert_eq!(terms[2].coeff, -2.0);
    }

    #[test]
    fn chandrasekhar_at_ones() {
        let n = 6;
        let p = ChandrasekharParams::<f64>::with_default_c(n).unwrap();
        let sys = chandrasekhar_system::<f64>(&p);
        let e = evaluate_system(&sys, &chandrasekhar_start(n)).unwrap();
        for (k, v) in e.values.iter().enumerate() {
            let i = (k + 1) as f64;
            let expect: f64 = -(0..n).map(|j| 33.0 / 64.0 * i / (i + j as f64)).sum::<f64>();
            assert!((v - expect).abs() < 1e-13, "{v} vs {expect}");
        }
        assert!(ChandrasekharParams::new(3, 1.5f64).is_err());
    }

    #[test]
    fn cyclic_four() {
        let sys = cyclic_n_roots::<f64>(4).unwrap();
        assert_eq!(sys.monomial_count(), 14);
        assert_eq!(sys.polys()[0].len(), 4);
        assert!(sys.polys()[0].iter().all(|t| t.degree() == 1));
        let v = sys.eval_naive(&[1.0; 4]).unwrap();
        assert_eq!(v, [4.0, 4.0, 4.0, 0.0]);
        assert!(cyclic_n_roots::<f64>(1).is_err());
    }

    #[test]
    fn stress_is_reproducible() {
        let a: Vec<_> = random_stress_products::<f64>(5, 8, 3).unwrap().collect();
        let b: Vec<_> = random_stress_products::<f64>(5, 8, 3).unwrap().collect();
        assert_eq!(a, b);
        assert_ne!(a[0].coeff, a[1].coeff);
        assert_eq!(a[0].degree(), 8);
        let z = random_point::<crate::xprec::Complex<f64>>(4, 9);
        assert!(z.iter().all(|w| (w.modulus() - 1.0).abs() < 1e-15));
        assert_eq!(random_point::<f64>(3, 1), random_point::<f64>(3, 1));
        let a = random_matrix::<crate::xprec::Complex<f64>>(4, 3, 2);
        assert_eq!(a, random_matrix(4, 3, 2));
        assert!(a.as_slice().iter().all(|z| z.im != 0.0 && z.re.abs() <= 1.0));
        assert!(random_matrix::<f64>(2, 2, 2).as_slice().iter().all(|x| x.abs() <= 1.0));
    }

    #[test]
    fn stress_sizes() {
        let big = random_stress_products::<f64>(65024, 1024, 1).unwrap();
        assert_eq!(big.len(), 65024);
        assert_eq!(big.monomial(65023).degree(), 1024);
        let rows: Vec<_> = random_stress_products::<f64>(2, 512, 1).unwrap().collect();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|m| m.exponents().len() == 512));
        assert!(random_stress_products::<f64>(0, 4, 1).is_err());
    }
}
