//! Products of variables and their gradients.
//!
//! The forward tree halves the number of live values at every level. With
//! `L` values at a level and `P` the largest power of two below `L`, slot
//! `t < P` of the next level is `v[t] * v[t + P]` when `t + P < L` and
//! `v[t]` otherwise, so a power-of-two level pairs `(0, P), (1, P+1), ...`
//! and a level of `2^k + l` values pairs only its first `l` slots.
//!
//! The gradient runs the same tree top down, carrying for each node the
//! product of everything outside its span. The two children of the root
//! need no multiplication; every other combined pair costs two.

use alloc::vec::Vec;

use super::{EvalError, OpCounter};
use crate::xprec::Scalar;

/// Forward partial products of `n` inputs.
#[derive(Debug, Clone)]
pub struct ProductTree<S> {
    /// Level 0 holds the inputs (later overwritten by the gradient), the
    /// last level holds the product.
    values: Vec<S>,
    /// `(offset, len)` per level.
    levels: Vec<(usize, usize)>,
    differentiated: bool,
}

/// Complements of the internal nodes that are neither leaves nor children
/// of the root: `n - 4` values for a power-of-two `n >= 4`.
#[derive(Debug, Clone, Default)]
pub struct GradientWorkspace<S> {
    comps: Vec<S>,
}

impl<S> GradientWorkspace<S> {
    pub fn new() -> Self {
        Self { comps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }
}

/// Largest power of two strictly below `len` (`len >= 2`).
#[inline]
fn half_span(len: usize) -> usize {
    1 << (usize::BITS - 1 - (len - 1).leading_zeros())
}

impl<S: Scalar> Default for ProductTree<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> ProductTree<S> {
    pub fn new() -> Self {
        Self {
            values: Vec::new(),
            levels: Vec::new(),
            differentiated: false,
        }
    }

    /// Evaluates the product of `v`, reusing this tree's storage.
    pub fn load(&mut self, v: &[S], counter: &mut OpCounter) -> Result<S, EvalError> {
        if v.is_empty() {
            return Err(EvalError::EmptyProduct);
        }
        self.values.clear();
        self.levels.clear();
        self.differentiated = false;
        self.values.extend_from_slice(v);
        self.levels.push((0, v.len()));
        let (mut off, mut len) = (0, v.len());
        while len > 1 {
            let p = half_span(len);
            let next = self.values.len();
            for t in 0..p {
                let node = if t + p < len {
                    counter.eval += 1;
                    self.values[off + t] * self.values[off + t + p]
                } else {
                    self.values[off + t]
                };
                self.values.push(node);
            }
            self.levels.push((next, p));
            off = next;
            len = p;
        }
        Ok(self.product())
    }

    pub fn len(&self) -> usize {
        self.levels.first().map_or(0, |l| l.1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn product(&self) -> S {
        *self.values.last().expect("tree not loaded")
    }

    /// Number of levels above the leaves.
    pub fn depth(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    /// Level `l` values; level 0 holds the gradient once computed.
    pub fn level(&self, l: usize) -> &[S] {
        let (off, len) = self.levels[l];
        &self.values[off..off + len]
    }

    /// Overwrites the input slots with `prod_{j != i} v_j`.
    pub fn gradient(&mut self, ws: &mut GradientWorkspace<S>, counter: &mut OpCounter) -> &[S] {
        if self.differentiated {
            return self.level(0);
        }
        self.differentiated = true;
        let n = self.len();
        if n == 1 {
            self.values[0] = S::one();
            return self.level(0);
        }
        let top = self.levels.len() - 1;
        // complements of level l for 1 <= l <= top - 2, stored level by level
        // from the top down
        ws.comps.clear();
        let mut ws_levels: Vec<(usize, usize)> = Vec::with_capacity(top);
        for l in (0..top.saturating_sub(1)).rev() {
            let (off, len) = self.levels[l];
            let p = self.levels[l + 1].1;
            let parent = |this: &Self, ws: &GradientWorkspace<S>, wl: &[(usize, usize)], t: usize| {
                if l + 1 == top - 1 {
                    // children of the root: the sibling's value
                    let (o, _) = this.levels[l + 1];
                    this.values[o + (1 - t)]
                } else {
                    let (wo, _) = wl[wl.len() - 1];
                    ws.comps[wo + t]
                }
            };
            if l == 0 {
                for t in 0..p {
                    let c = parent(self, ws, &ws_levels, t);
                    if t + p < len {
                        let (a, b) = (self.values[off + t], self.values[off + t + p]);
                        self.values[off + t] = c * b;
                        self.values[off + t + p] = c * a;
                        counter.grad += 2;
                    } else {
                        self.values[off + t] = c;
                    }
                }
            } else {
                let wo = ws.comps.len();
                ws.comps.resize(wo + len, S::zero());
                for t in 0..p {
                    let c = parent(self, ws, &ws_levels, t);
                    if t + p < len {
                        ws.comps[wo + t] = c * self.values[off + t + p];
                        ws.comps[wo + t + p] = c * self.values[off + t];
                        counter.grad += 2;
                    } else {
                        ws.comps[wo + t] = c;
                    }
                }
                ws_levels.push((wo, len));
            }
        }
        if top == 1 {
            // n == 2
            self.values.swap(0, 1);
        }
        self.level(0)
    }
}

/// Builds the tree for `v` and returns it with the product.
pub fn eval_product_tree<S: Scalar>(
    v: &[S],
    counter: &mut OpCounter,
) -> Result<(ProductTree<S>, S), EvalError> {
    let mut tree = ProductTree::new();
    let p = tree.load(v, counter)?;
    Ok((tree, p))
}

/// All leave-one-out products from an evaluated tree.
pub fn gradient_from_tree<'a, S: Scalar>(
    tree: &'a mut ProductTree<S>,
    counter: &mut OpCounter,
) -> &'a [S] {
    let mut ws = GradientWorkspace::new();
    tree.gradient(&mut ws, counter)
}

/// Interlaced forward/backward reverse mode with `3n - 5` multiplications,
/// `n - 2` stored prefix products and one backward temporary.
pub fn speelpenning_sequential<S: Scalar>(
    v: &[S],
    counter: &mut OpCounter,
) -> Result<(S, Vec<S>), EvalError> {
    let n = v.len();
    if n < 2 {
        return Err(EvalError::TooFewFactors { n, min: 2 });
    }
    // prefix[j] = v_0 ... v_{j+1}
    let mut prefix = Vec::with_capacity(n - 2);
    let mut acc = v[0];
    for &x in &v[1..n - 1] {
        acc *= x;
        counter.eval += 1;
        prefix.push(acc);
    }
    let product = acc * v[n - 1];
    counter.eval += 1;

    let mut grad = alloc::vec![S::zero(); n];
    grad[n - 1] = acc;
    let mut suffix = v[n - 1];
    for i in (1..n - 1).rev() {
        let before = if i == 1 { v[0] } else { prefix[i - 2] };
        grad[i] = before * suffix;
        suffix *= v[i];
        counter.grad += 2;
    }
    grad[0] = suffix;
    Ok((product, grad))
}

/// Gradient multiplications of the tree circuit for `n` inputs.
pub fn tree_gradient_mults(n: usize) -> u64 {
    let mut len = n;
    let mut pairs_below_top = 0u64;
    while len > 2 {
        let p = half_span(len);
        pairs_below_top += (len - p) as u64;
        len = p;
    }
    2 * pairs_below_top
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(v: &[f64]) -> (f64, Vec<f64>, OpCounter) {
        let mut c = OpCounter::default();
        let (mut tree, p) = eval_product_tree(v, &mut c).unwrap();
        let g = gradient_from_tree(&mut tree, &mut c).to_vec();
        (p, g, c)
    }

    #[test]
    fn four_inputs() {
        let (p, g, c) = run(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(p, 24.0);
        assert_eq!(g, [24.0, 12.0, 8.0, 6.0]);
        assert_eq!((c.eval, c.grad), (3, 4));
    }

    #[test]
    fn small_cases() {
        let (p, g, c) = run(&[5.0]);
        assert_eq!((p, g, c.total()), (5.0, vec![1.0], 0));
        let (p, g, c) = run(&[2.0, 7.0]);
        assert_eq!((p, g, c.eval, c.grad), (14.0, vec![7.0, 2.0], 1, 0));
        let (p, g, c) = run(&[2.0, 3.0, 5.0]);
        assert_eq!((p, g, c.eval, c.grad), (30.0, vec![15.0, 10.0, 6.0], 2, 2));
        assert!(eval_product_tree::<f64>(&[], &mut OpCounter::default()).is_err());
    }

    #[test]
    fn strided_pairing() {
        let mut c = OpCounter::default();
        let (tree, _) = eval_product_tree(&[2.0, 3.0, 5.0, 7.0, 11.0], &mut c).unwrap();
        // five inputs: only the first slot pairs (2 * 11), then (0,2), (1,3)
        assert_eq!(tree.level(1), [22.0, 3.0, 5.0, 7.0]);
        assert_eq!(tree.level(2), [110.0, 21.0]);
    }

    #[test]
    fn workspace_size_for_powers_of_two() {
        for k in 2..=10 {
            let n = 1usize << k;
            let v = vec![1.0; n];
            let mut c = OpCounter::default();
            let (mut tree, _) = eval_product_tree(&v, &mut c).unwrap();
            let mut ws = GradientWorkspace::new();
            tree.gradient(&mut ws, &mut c);
            assert_eq!(ws.len(), n - 4);
            assert_eq!(c.grad as usize, 2 * n - 4);
            assert_eq!(tree_gradient_mults(n), c.grad);
        }
    }

    #[test]
    fn sequential_reference() {
        let mut c = OpCounter::default();
        let (p, g) = speelpenning_sequential(&[1.0, 2.0, 3.0, 4.0], &mut c).unwrap();
        assert_eq!((p, g), (24.0, vec![24.0, 12.0, 8.0, 6.0]));
        assert_eq!(c.total(), 7);
        let mut c = OpCounter::default();
        let (p, g) = speelpenning_sequential(&[3.0, 4.0], &mut c).unwrap();
        assert_eq!((p, g, c.total()), (12.0, vec![4.0, 3.0], 1));
    }

    #[test]
    fn zero_input_gradient() {
        let (p, g, _) = run(&[0.0, 1.0, 1.0]);
        assert_eq!(p, 0.0);
        assert_eq!(g, [1.0, 0.0, 0.0]);
    }
}
