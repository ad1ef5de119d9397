use alloc::vec::Vec;

use super::tree::{GradientWorkspace, ProductTree};
use super::{EvalError, OpCounter};
use crate::exec::{Executor, Serial};
use crate::mgs::Matrix;
use crate::polyrep::{decompose, eval_common_factor, Monomial, MonomialDecomposition, PolySystem, PowerTable};
use crate::reduce::tree_sum;
use crate::xprec::Scalar;

/// Values and Jacobian of a system at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemEvaluation<S> {
    pub values: Vec<S>,
    /// `m x n`, entry `(i, j)` is `df_i / dx_j`.
    pub jacobian: Matrix<S>,
    pub counts: OpCounter,
}

/// A monomial prepared for repeated evaluation.
#[derive(Debug, Clone)]
struct Term<S> {
    coeff: S,
    dec: MonomialDecomposition,
    exps: Vec<u32>,
    /// Exponents as scalars, converted once.
    factors: Vec<S>,
}

impl<S: Scalar> Term<S> {
    fn new(mon: &Monomial<S>) -> Self {
        Self::with_decomposition(mon, decompose(mon))
    }

    fn with_decomposition(mon: &Monomial<S>, dec: MonomialDecomposition) -> Self {
        let exps: Vec<u32> = mon.exponents().iter().map(|e| e.1).collect();
        Self {
            coeff: mon.coeff,
            factors: exps.iter().map(|&d| S::from_f64(d as f64)).collect(),
            exps,
            dec,
        }
    }
}

/// Per-task scratch space.
struct Scratch<S> {
    tree: ProductTree<S>,
    ws: GradientWorkspace<S>,
    xs: Vec<S>,
}

impl<S: Scalar> Scratch<S> {
    fn new() -> Self {
        Self {
            tree: ProductTree::new(),
            ws: GradientWorkspace::new(),
            xs: Vec::new(),
        }
    }
}

/// Value of one term; partial derivatives are appended to `out` in
/// variable order.
fn eval_term<S: Scalar>(
    term: &Term<S>,
    table: &PowerTable<S>,
    x: &[S],
    scratch: &mut Scratch<S>,
    counter: &mut OpCounter,
    out: &mut Vec<(usize, S)>,
) -> S {
    let vars = &term.dec.distinct_vars;
    match vars.len() {
        0 => term.coeff,
        1 => {
            let (v, d) = (vars[0], term.exps[0]);
            let value = term.coeff * table.get(v, d);
            counter.eval += 1;
            let deriv = if d == 1 {
                term.coeff
            } else {
                counter.grad += 2;
                term.coeff * term.factors[0] * table.get(v, d - 1)
            };
            out.push((v, deriv));
            value
        }
        k => {
            let cf = if term.dec.common_factor.is_empty() {
                term.coeff
            } else {
                counter.eval += term.dec.common_factor.len() as u64;
                term.coeff * eval_common_factor(&term.dec, table)
            };
            scratch.xs.clear();
            scratch.xs.extend(vars.iter().map(|&v| x[v]));
            let p = scratch
                .tree
                .load(&scratch.xs, counter)
                .expect("k >= 2 factors");
            let value = cf * p;
            counter.eval += 1;
            let grads = scratch.tree.gradient(&mut scratch.ws, counter);
            debug_assert_eq!(grads.len(), k);
            for i in 0..k {
                let deriv = if term.exps[i] == 1 {
                    counter.grad += 1;
                    cf * grads[i]
                } else {
                    counter.grad += 2;
                    cf * term.factors[i] * grads[i]
                };
                out.push((vars[i], deriv));
            }
            value
        }
    }
}

/// Value and nonzero partial derivatives of one monomial, from its
/// decomposition and the power table of the point.
pub fn eval_monomial_and_derivs<S: Scalar>(
    mon: &Monomial<S>,
    dec: &MonomialDecomposition,
    table: &PowerTable<S>,
    point: &[S],
    counter: &mut OpCounter,
) -> (S, Vec<(usize, S)>) {
    let term = Term::with_decomposition(mon, dec.clone());
    let mut out = Vec::with_capacity(dec.distinct_vars.len());
    let v = eval_term(&term, table, point, &mut Scratch::new(), counter, &mut out);
    (v, out)
}

/// A system compiled for repeated evaluation.
#[derive(Debug, Clone)]
pub struct EvalPlan<S> {
    n_vars: usize,
    maxdeg: Vec<u32>,
    polys: Vec<Vec<Term<S>>>,
}

#[derive(Debug, Clone)]
struct PolyOut<S> {
    value: S,
    row: Vec<(usize, S)>,
    counter: OpCounter,
}

impl<S: Scalar> EvalPlan<S> {
    pub fn new(sys: &PolySystem<S>) -> Self {
        Self {
            n_vars: sys.n_vars(),
            maxdeg: sys.max_degrees(),
            polys: sys
                .polys()
                .iter()
                .map(|p| p.iter().map(Term::new).collect())
                .collect(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn num_polys(&self) -> usize {
        self.polys.len()
    }

    /// Values and Jacobian at `x`. Polynomials are independent tasks; the
    /// terms of each are summed in a fixed balanced order, so the result
    /// does not depend on the executor.
    pub fn evaluate<E: Executor>(&self, x: &[S], exec: &E) -> Result<SystemEvaluation<S>, EvalError> {
        if x.len() != self.n_vars {
            return Err(crate::polyrep::PolyError::DimensionMismatch {
                expected: self.n_vars,
                got: x.len(),
            }
            .into());
        }
        let table = PowerTable::build(x, &self.maxdeg);
        let mut outs: Vec<PolyOut<S>> = (0..self.polys.len())
            .map(|_| PolyOut {
                value: S::zero(),
                row: Vec::new(),
                counter: OpCounter::default(),
            })
            .collect();
        exec.for_each(&mut outs, |p, out| {
            let mut scratch = Scratch::new();
            let terms = &self.polys[p];
            let mut values = Vec::with_capacity(terms.len());
            let mut contribs = Vec::new();
            for term in terms {
                let v = eval_term(term, &table, x, &mut scratch, &mut out.counter, &mut contribs);
                values.push(v);
            }
            out.value = tree_sum(&values);
            // stable: contributions to one variable stay in term order
            contribs.sort_by_key(|c| c.0);
            let mut buf = Vec::new();
            let mut i = 0;
            while i < contribs.len() {
                let var = contribs[i].0;
                buf.clear();
                while i < contribs.len() && contribs[i].0 == var {
                    buf.push(contribs[i].1);
                    i += 1;
                }
                out.row.push((var, tree_sum(&buf)));
            }
        });
        let mut counts = OpCounter {
            eval: table.mults(),
            grad: 0,
        };
        let mut jacobian = Matrix::zeros(self.polys.len(), self.n_vars);
        let mut values = Vec::with_capacity(outs.len());
        for (i, out) in outs.into_iter().enumerate() {
            counts.absorb(out.counter);
            values.push(out.value);
            for (j, d) in out.row {
                jacobian[(i, j)] = d;
            }
        }
        Ok(SystemEvaluation {
            values,
            jacobian,
            counts,
        })
    }
}

/// Values and Jacobian of `sys` at `point`, serially.
pub fn evaluate_system<S: Scalar>(sys: &PolySystem<S>, point: &[S]) -> Result<SystemEvaluation<S>, EvalError> {
    EvalPlan::new(sys).evaluate(point, &Serial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn mon(c: f64, e: &[(usize, u32)]) -> Monomial<f64> {
        Monomial::new(c, e.iter().copied()).unwrap()
    }

    #[test]
    fn hand_derivatives() {
        let m = mon(3.0, &[(0, 2), (1, 1)]);
        let x = [2.0, 5.0];
        let table = PowerTable::build(&x, &[2, 1]);
        let mut c = OpCounter::default();
        let (v, d) = eval_monomial_and_derivs(&m, &decompose(&m), &table, &x, &mut c);
        assert_eq!(v, 60.0);
        assert_eq!(d, [(0, 60.0), (1, 12.0)]);
    }

    #[test]
    fn zero_input_is_safe() {
        let m = mon(1.0, &[(0, 1), (1, 1), (2, 1)]);
        let x = [0.0, 1.0, 1.0];
        let table = PowerTable::build(&x, &[1, 1, 1]);
        let (v, d) = eval_monomial_and_derivs(&m, &decompose(&m), &table, &x, &mut OpCounter::default());
        assert_eq!(v, 0.0);
        assert_eq!(d[0], (0, 1.0));
    }

    #[test]
    fn linear_system() {
        let sys = PolySystem::new(
            2,
            vec![vec![mon(1.0, &[(0, 1)]), mon(1.0, &[(1, 1)]), mon(-3.0, &[])]],
        )
        .unwrap();
        let e = evaluate_system(&sys, &[1.0, 2.0]).unwrap();
        assert_eq!(e.values, [0.0]);
        assert_eq!(e.jacobian.col(0), [1.0]);
        assert_eq!(e.jacobian.col(1), [1.0]);
        assert!(evaluate_system(&sys, &[1.0]).is_err());
    }

    #[test]
    fn single_variable_powers() {
        // 2 x^3 at x = 3: value 54, derivative 54
        let sys = PolySystem::new(1, vec![vec![mon(2.0, &[(0, 3)])]]).unwrap();
        let e = evaluate_system(&sys, &[3.0]).unwrap();
        assert_eq!(e.values, [54.0]);
        assert_eq!(e.jacobian[(0, 0)], 54.0);
    }
}
