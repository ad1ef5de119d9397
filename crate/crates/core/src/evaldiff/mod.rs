//! Evaluation and differentiation of polynomial systems.
//!
//! Every monomial is `coeff * F * P` with `F` its common factor and `P` the
//! product of its distinct variables; `P` and all of its leave-one-out
//! products come from a [`ProductTree`], so no derivative is ever formed by
//! division.

mod system;
mod tree;

pub use system::{eval_monomial_and_derivs, evaluate_system, EvalPlan, SystemEvaluation};
pub use tree::{
    eval_product_tree, gradient_from_tree, speelpenning_sequential, tree_gradient_mults,
    GradientWorkspace, ProductTree,
};

use crate::polyrep::PolyError;

/// Multiplications per phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub eval: u64,
    pub grad: u64,
}

impl OpCounter {
    pub fn total(&self) -> u64 {
        self.eval + self.grad
    }

    pub fn absorb(&mut self, other: OpCounter) {
        self.eval += other.eval;
        self.grad += other.grad;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("product of zero factors")]
    EmptyProduct,
    #[error("{n} factors given, at least {min} required")]
    TooFewFactors { n: usize, min: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}
