use alloc::vec;
use alloc::vec::Vec;

use super::{Matrix, MgsError, TilingConfig};
use crate::exec::Executor;
use crate::xprec::{ExactSum, Scalar};

fn check_shape<S: Scalar>(r: &Matrix<S>, n: usize) -> Result<(), MgsError> {
    if r.rows() < n || r.cols() < n {
        return Err(MgsError::Shape("R is smaller than y"));
    }
    Ok(())
}

#[inline]
fn solve_row<S: Scalar>(r: &Matrix<S>, i: usize, acc: &ExactSum<S>) -> Result<S, MgsError> {
    let d = r[(i, i)];
    if d.is_zero() {
        return Err(MgsError::Singular { index: i });
    }
    Ok(acc.round() / d)
}

/// Solves `R x = y` row by row from the bottom, using the leading
/// `y.len()` square block of `R`. Each right-hand side
/// `y_i - sum_{j>i} r_ij x_j` is summed exactly and rounded once.
pub fn back_substitute<S: Scalar>(r: &Matrix<S>, y: &[S]) -> Result<Vec<S>, MgsError> {
    let n = y.len();
    check_shape(r, n)?;
    let mut x = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut acc = ExactSum::new();
        acc.add(y[i]);
        for j in i + 1..n {
            acc.sub_product(r[(i, j)], x[j]);
        }
        x[i] = solve_row(r, i, &acc)?;
    }
    Ok(x)
}

/// Back substitution over `L` tiles of `K` indices.
///
/// Stage `s` solves the `(L - s)`-th tile from the top, bottom row first,
/// and then every tile above it folds the new components into its rows'
/// running sums as an independent task. Because the sums are exact, the
/// result equals [`back_substitute`] bit for bit.
pub fn back_substitute_staged<S: Scalar, E: Executor>(
    r: &Matrix<S>,
    y: &[S],
    cfg: TilingConfig,
    exec: &E,
) -> Result<Vec<S>, MgsError> {
    let n = y.len();
    check_shape(r, n)?;
    let k = cfg.k();
    let tiles = cfg.rounds(n);
    let mut accs: Vec<ExactSum<S>> = y
        .iter()
        .map(|&yi| {
            let mut a = ExactSum::new();
            a.add(yi);
            a
        })
        .collect();
    let mut x = vec![S::zero(); n];
    for stage in 0..tiles {
        let pivot = tiles - 1 - stage;
        let (lo, hi) = (pivot * k, ((pivot + 1) * k).min(n));
        for i in (lo..hi).rev() {
            for j in i + 1..hi {
                accs[i].sub_product(r[(i, j)], x[j]);
            }
            x[i] = solve_row(r, i, &accs[i])?;
        }
        let solved = &x[lo..hi];
        let mut above: Vec<&mut [ExactSum<S>]> = accs[..lo].chunks_mut(k).collect();
        exec.for_each(&mut above, |t, rows| {
            for (di, acc) in rows.iter_mut().enumerate() {
                let i = t * k + di;
                for (dj, &xj) in solved.iter().enumerate() {
                    acc.sub_product(r[(i, lo + dj)], xj);
                }
            }
        });
    }
    Ok(x)
}
