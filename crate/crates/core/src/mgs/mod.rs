//! Least squares by modified Gram-Schmidt on the augmented matrix `[A b]`.
//!
//! Orthogonalizing `b` along with the columns of `A` yields `R` with last
//! column `(y, z)`, where `y = Q^H b` and `z` is the residual norm, so that
//! `||b - Ax||^2 = ||Rx - y||^2 + z^2` and `x` follows by back
//! substitution.
//!
//! Vector reductions run in `L = ceil(m / K)` rounds of `K` components.
//! Each round accumulates its partial sum exactly and the partials are
//! merged by a balanced tree, so every inner product is the correctly
//! rounded sum of its rounded terms no matter how the work is tiled.

mod backsub;
mod matrix;
mod qr;

pub use backsub::{back_substitute, back_substitute_staged};
pub use matrix::Matrix;
pub use qr::{
    mgs_qr, mgs_qr_delayed, orthogonality_error, residual_check, tiled_dot, AugmentedMatrix,
    QRFactors,
};

use alloc::vec::Vec;

use crate::exec::Executor;
use crate::xprec::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MgsError {
    #[error("Gram-Schmidt breakdown at column {column}: columns are numerically dependent")]
    Breakdown { column: usize },
    #[error("zero diagonal entry at index {index} in back substitution")]
    Singular { index: usize },
    #[error("shape mismatch: {0}")]
    Shape(&'static str),
    #[error("tile size must be at least 1")]
    InvalidTile,
}

/// Components per round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TilingConfig {
    k: usize,
}

impl TilingConfig {
    pub fn new(k: usize) -> Result<Self, MgsError> {
        if k == 0 {
            return Err(MgsError::InvalidTile);
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `L = ceil(len / K)`.
    pub fn rounds(&self, len: usize) -> usize {
        len.div_ceil(self.k)
    }
}

impl Default for TilingConfig {
    fn default() -> Self {
        Self { k: 32 }
    }
}

/// When the pivot column is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    /// Before the sweep that uses it.
    #[default]
    Immediate,
    /// One sweep late; each update task derives the normalized pivot from
    /// the stored column and its norm.
    Delayed,
}

/// Solution of `min ||b - Ax||`.
#[derive(Debug, Clone)]
pub struct LeastSquares<S: Scalar> {
    pub x: Vec<S>,
    /// Residual norm.
    pub z: S::Real,
    pub factors: QRFactors<S>,
}

/// Factors `[A b]` and back-substitutes for `x`.
pub fn least_squares_solve<S: Scalar, E: Executor>(
    a: &Matrix<S>,
    b: &[S],
    cfg: TilingConfig,
    variant: Variant,
    exec: &E,
) -> Result<LeastSquares<S>, MgsError> {
    let aug = AugmentedMatrix::new(a, b)?;
    let factors = match variant {
        Variant::Immediate => mgs_qr(aug, cfg, exec)?,
        Variant::Delayed => mgs_qr_delayed(aug, cfg, exec)?,
    };
    let x = back_substitute_staged(&factors.r, &factors.y(), cfg, exec)?;
    Ok(LeastSquares {
        x,
        z: factors.z(),
        factors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Serial;
    use alloc::vec;

    #[test]
    fn mean_minimizes() {
        let a = Matrix::from_columns(&[vec![1.0, 1.0, 1.0]]);
        let sol = least_squares_solve(
            &a,
            &[1.0, 2.0, 3.0],
            TilingConfig::new(2).unwrap(),
            Variant::Immediate,
            &Serial,
        )
        .unwrap();
        assert!((sol.x[0] - 2.0).abs() < 1e-15);
        assert!((sol.z - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn square_consistent() {
        let a = Matrix::from_columns(&[vec![2.0, 1.0], vec![1.0, 3.0]]);
        let b = [3.0, 5.0];
        for v in [Variant::Immediate, Variant::Delayed] {
            let sol = least_squares_solve(&a, &b, TilingConfig::default(), v, &Serial).unwrap();
            let ax = a.mul_vec(&sol.x);
            assert!((ax[0] - 3.0).abs() < 1e-14 && (ax[1] - 5.0).abs() < 1e-14);
            assert!(sol.z.abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_zero_tile() {
        assert_eq!(TilingConfig::new(0), Err(MgsError::InvalidTile));
        assert_eq!(TilingConfig::new(16).unwrap().rounds(100), 7);
    }
}
