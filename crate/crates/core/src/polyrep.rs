//! Sparse distributed polynomial systems.
//!
//! A polynomial is a list of monomials with nonzero coefficients. Each
//! monomial `c * x_{i1}^{d1} ... x_{ik}^{dk}` splits into the product of its
//! `k` distinct variables and the common factor
//! `x_{i1}^{d1-1} ... x_{ik}^{dk-1}`, which divides every partial
//! derivative. Pure powers of the variables are tabulated once per point.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::xprec::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable x{var} in polynomial {poly} is out of range for {n_vars} variables")]
    VariableOutOfRange {
        poly: usize,
        var: usize,
        n_vars: usize,
    },
    #[error("a system needs at least one polynomial and one variable")]
    Empty,
    #[error("point has dimension {got}, system has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("exponent overflow for x{var}")]
    ExponentOverflow { var: usize },
}

/// `coeff * prod x_var^exp` over a sparse exponent list.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial<S> {
    pub coeff: S,
    /// `(var, exp)` with strictly increasing `var` and `exp >= 1`.
    exponents: Vec<(usize, u32)>,
}

impl<S: Scalar> Monomial<S> {
    /// Builds a monomial from factors in any order. Repeated variables are
    /// multiplied together and zero exponents dropped.
    pub fn new<I>(coeff: S, factors: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (usize, u32)>,
    {
        let mut exps: Vec<(usize, u32)> = factors.into_iter().filter(|f| f.1 > 0).collect();
        exps.sort_by_key(|f| f.0);
        let mut merged: Vec<(usize, u32)> = Vec::with_capacity(exps.len());
        for (var, e) in exps {
            match merged.last_mut() {
                Some(last) if last.0 == var => {
                    last.1 = last
                        .1
                        .checked_add(e)
                        .filter(|d| *d < i32::MAX as u32)
                        .ok_or(PolyError::ExponentOverflow { var })?;
                }
                _ => merged.push((var, e)),
            }
        }
        Ok(Self {
            coeff,
            exponents: merged,
        })
    }

    pub fn constant(coeff: S) -> Self {
        Self {
            coeff,
            exponents: Vec::new(),
        }
    }

    /// Product of distinct variables, each to the first power.
    pub fn product_of(coeff: S, vars: impl IntoIterator<Item = usize>) -> Result<Self, PolyError> {
        Self::new(coeff, vars.into_iter().map(|v| (v, 1)))
    }

    pub fn exponents(&self) -> &[(usize, u32)] {
        &self.exponents
    }

    pub fn degree(&self) -> u64 {
        self.exponents.iter().map(|e| e.1 as u64).sum()
    }

    pub fn exponent_vector(&self, n_vars: usize) -> Vec<u32> {
        let mut v = vec![0; n_vars];
        for &(var, e) in &self.exponents {
            v[var] = e;
        }
        v
    }

    /// Direct evaluation by repeated multiplication, for cross-checks.
    pub fn eval_naive(&self, x: &[S]) -> S {
        let mut acc = self.coeff;
        for &(var, e) in &self.exponents {
            for _ in 0..e {
                acc *= x[var];
            }
        }
        acc
    }

    pub fn map_coeff<T: Scalar>(&self, f: impl Fn(S) -> T) -> Monomial<T> {
        Monomial {
            coeff: f(self.coeff),
            exponents: self.exponents.clone(),
        }
    }
}

/// Lexicographic comparison of the dense exponent vectors.
pub fn lex_cmp(a: &[(usize, u32)], b: &[(usize, u32)]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x.0 != y.0 {
            // the list with the smaller variable index has a nonzero entry
            // where the other has zero
            return y.0.cmp(&x.0);
        }
        if x.1 != y.1 {
            return x.1.cmp(&y.1);
        }
    }
    a.len().cmp(&b.len())
}

/// A monomial split into its distinct variables and common factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialDecomposition {
    pub distinct_vars: Vec<usize>,
    /// `(var, d - 1)` for every variable with `d >= 2`.
    pub common_factor: Vec<(usize, u32)>,
}

impl MonomialDecomposition {
    /// The exponent list the decomposition came from.
    pub fn recompose(&self) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = self.distinct_vars.iter().map(|&v| (v, 1)).collect();
        for &(var, e) in &self.common_factor {
            if let Ok(i) = out.binary_search_by_key(&var, |p| p.0) {
                out[i].1 += e;
            }
        }
        out
    }
}

pub fn decompose<S: Scalar>(mon: &Monomial<S>) -> MonomialDecomposition {
    MonomialDecomposition {
        distinct_vars: mon.exponents.iter().map(|e| e.0).collect(),
        common_factor: mon
            .exponents
            .iter()
            .filter(|e| e.1 >= 2)
            .map(|&(v, d)| (v, d - 1))
            .collect(),
    }
}

/// A system of `m` polynomials in `n_vars` variables, in canonical form:
/// like terms merged, zero terms dropped, monomials in decreasing
/// lexicographic order of their exponent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem<S> {
    n_vars: usize,
    polys: Vec<Vec<Monomial<S>>>,
}

impl<S: Scalar> PolySystem<S> {
    pub fn new(n_vars: usize, polys: Vec<Vec<Monomial<S>>>) -> Result<Self, PolyError> {
        if n_vars == 0 || polys.is_empty() {
            return Err(PolyError::Empty);
        }
        let mut out = Vec::with_capacity(polys.len());
        for (p, mut terms) in polys.into_iter().enumerate() {
            if let Some(var) = terms
                .iter()
                .flat_map(|t| t.exponents.iter().map(|e| e.0))
                .find(|&v| v >= n_vars)
            {
                return Err(PolyError::VariableOutOfRange { poly: p, var, n_vars });
            }
            terms.sort_by(|a, b| lex_cmp(&b.exponents, &a.exponents));
            let mut merged: Vec<Monomial<S>> = Vec::with_capacity(terms.len());
            for t in terms {
                match merged.last_mut() {
                    Some(last) if last.exponents == t.exponents => last.coeff += t.coeff,
                    _ => merged.push(t),
                }
            }
            merged.retain(|t| !t.coeff.is_zero());
            out.push(merged);
        }
        Ok(Self { n_vars, polys: out })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn num_polys(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[Vec<Monomial<S>>] {
        &self.polys
    }

    pub fn monomial_count(&self) -> usize {
        self.polys.iter().map(Vec::len).sum()
    }

    /// Largest exponent of each variable over the whole system.
    pub fn max_degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.n_vars];
        for &(var, e) in self.polys.iter().flatten().flat_map(|t| t.exponents.iter()) {
            d[var] = d[var].max(e);
        }
        d
    }

    /// Values by direct evaluation of every monomial, for cross-checks.
    pub fn eval_naive(&self, x: &[S]) -> Result<Vec<S>, PolyError> {
        self.check_point(x)?;
        Ok(self
            .polys
            .iter()
            .map(|p| p.iter().fold(S::zero(), |acc, t| acc + t.eval_naive(x)))
            .collect())
    }

    pub fn check_point(&self, x: &[S]) -> Result<(), PolyError> {
        if x.len() != self.n_vars {
            return Err(PolyError::DimensionMismatch {
                expected: self.n_vars,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(S) -> T) -> PolySystem<T> {
        let polys = self
            .polys
            .iter()
            .map(|p| p.iter().map(|t| t.map_coeff(&f)).collect())
            .collect();
        // a converted coefficient may round to zero
        PolySystem::new(self.n_vars, polys).expect("structure already validated")
    }
}

/// Pure powers `x_i^d` for `d = 1..=maxdeg_i`, stored flat.
#[derive(Debug, Clone)]
pub struct PowerTable<S> {
    offsets: Vec<usize>,
    data: Vec<S>,
}

impl<S: Scalar> PowerTable<S> {
    /// Tabulates the powers with `maxdeg_i - 1` multiplications per
    /// variable.
    pub fn build(x: &[S], maxdeg: &[u32]) -> Self {
        let mut offsets = Vec::with_capacity(x.len() + 1);
        let total: usize = maxdeg.iter().map(|&d| d as usize).sum();
        let mut data = Vec::with_capacity(total);
        for (&xi, &d) in x.iter().zip(maxdeg) {
            offsets.push(data.len());
            if d == 0 {
                continue;
            }
            let mut p = xi;
            data.push(p);
            for _ in 1..d {
                p *= xi;
                data.push(p);
            }
        }
        offsets.push(data.len());
        Self { offsets, data }
    }

    /// Multiplications spent building the table.
    pub fn mults(&self) -> u64 {
        self.offsets
            .windows(2)
            .map(|w| (w[1] - w[0]).saturating_sub(1) as u64)
            .sum()
    }

    /// `x_var^d`; `d = 0` gives one.
    #[inline]
    pub fn get(&self, var: usize, d: u32) -> S {
        if d == 0 {
            return S::one();
        }
        let i = self.offsets[var] + d as usize - 1;
        debug_assert!(i < self.offsets[var + 1], "power not tabulated");
        self.data[i]
    }
}

/// Product of the tabulated powers in the common factor; one when empty.
pub fn eval_common_factor<S: Scalar>(dec: &MonomialDecomposition, table: &PowerTable<S>) -> S {
    let mut it = dec.common_factor.iter();
    let Some(&(v, e)) = it.next() else {
        return S::one();
    };
    it.fold(table.get(v, e), |acc, &(v, e)| acc * table.get(v, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mon(c: f64, e: &[(usize, u32)]) -> Monomial<f64> {
        Monomial::new(c, e.iter().copied()).unwrap()
    }

    #[test]
    fn decomposition_examples() {
        let d = decompose(&mon(1.0, &[(1, 1), (2, 1), (3, 1)]));
        assert_eq!(d.distinct_vars, [1, 2, 3]);
        assert!(d.common_factor.is_empty());
        let d = decompose(&mon(1.0, &[(1, 3), (3, 1)]));
        assert_eq!(d.distinct_vars, [1, 3]);
        assert_eq!(d.common_factor, [(1, 2)]);
        let d = decompose(&mon(1.0, &[(2, 5), (0, 2)]));
        assert_eq!(d.distinct_vars, [0, 2]);
        assert_eq!(d.common_factor, [(0, 1), (2, 4)]);
        assert_eq!(d.recompose(), [(0, 2), (2, 5)]);
    }

    #[test]
    fn repeated_factors_merge() {
        let m = mon(2.0, &[(1, 1), (0, 0), (1, 2)]);
        assert_eq!(m.exponents(), &[(1, 3)]);
        assert_eq!(m.degree(), 3);
    }

    #[test]
    fn power_table_examples() {
        let t = PowerTable::build(&[2.0, 1.0, 3.0], &[4, 3, 0]);
        assert_eq!(
            (1..=4).map(|d| t.get(0, d)).collect::<Vec<_>>(),
            [2.0, 4.0, 8.0, 16.0]
        );
        assert_eq!(t.get(1, 3), 1.0);
        assert_eq!(t.get(2, 0), 1.0);
        assert_eq!(t.mults(), 3 + 2);
    }

    #[test]
    fn common_factor_examples() {
        let t = PowerTable::build(&[2.0, 3.0, 2.0], &[2, 3, 5]);
        let empty = MonomialDecomposition {
            distinct_vars: vec![0],
            common_factor: vec![],
        };
        assert_eq!(eval_common_factor(&empty, &t), 1.0);
        assert_eq!(eval_common_factor(&decompose(&mon(1.0, &[(1, 3)])), &t), 9.0);
        let d = decompose(&mon(1.0, &[(0, 2), (2, 5)]));
        assert_eq!(eval_common_factor(&d, &t), 32.0);
    }

    #[test]
    fn canonical_form() {
        let p = vec![
            mon(1.0, &[]),
            mon(3.0, &[(1, 1)]),
            mon(2.0, &[(0, 1)]),
            mon(-3.0, &[(1, 1)]),
            mon(1.0, &[(0, 2)]),
            mon(0.0, &[(0, 1), (1, 1)]),
        ];
        let sys = PolySystem::new(2, vec![p]).unwrap();
        let exps: Vec<_> = sys.polys()[0].iter().map(|t| t.exponent_vector(2)).collect();
        assert_eq!(exps, [vec![2, 0], vec![1, 0], vec![0, 0]]);
        assert!(matches!(
            PolySystem::new(2, vec![vec![mon(1.0, &[(2, 1)])]]),
            Err(PolyError::VariableOutOfRange { var: 2, .. })
        ));
    }

    #[test]
    fn power_table_matches_qd() {
        use crate::xprec::{DoubleDouble, QuadDouble, RealScalar};
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let x: Vec<DoubleDouble> = (0..8)
            .map(|_| DoubleDouble::from(rng.random_range(0.5..2.0)) / DoubleDouble::from(3.0))
            .collect();
        let maxdeg = [12u32; 8];
        let t = PowerTable::build(&x, &maxdeg);
        for (i, &xi) in x.iter().enumerate() {
            let q = QuadDouble::from(xi);
            let mut p = q;
            for d in 1..=maxdeg[i] {
                let err = (QuadDouble::from(t.get(i, d)) - p).modulus() / p.modulus();
                assert!(err.to_f64() <= d as f64 * DoubleDouble::eps(), "x{i}^{d}: {err:?}");
                p *= q;
            }
        }
    }
}
