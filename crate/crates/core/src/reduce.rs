//! Fixed-order balanced reductions.

use alloc::vec::Vec;

use crate::xprec::Scalar;

/// Sums `xs` by a balanced binary tree: adjacent pairs at every level, an
/// odd trailing element passing up unchanged.
///
/// The grouping depends only on `xs.len()`, so the result is reproducible
/// bit for bit.
pub fn tree_sum<S: Scalar>(xs: &[S]) -> S {
    match xs.len() {
        0 => S::zero(),
        1 => xs[0],
        2 => xs[0] + xs[1],
        _ => {
            let mut level: Vec<S> = xs.chunks(2).map(pair_sum).collect();
            while level.len() > 1 {
                let next = level.len().div_ceil(2);
                for t in 0..next {
                    level[t] = pair_sum(&level[2 * t..(2 * t + 2).min(level.len())]);
                }
                level.truncate(next);
            }
            level[0]
        }
    }
}

#[inline]
fn pair_sum<S: Scalar>(pair: &[S]) -> S {
    if pair.len() == 2 {
        pair[0] + pair[1]
    } else {
        pair[0]
    }
}

/// Combines `items` in place with the same balanced pairing as
/// [`tree_sum`], using `merge(left, right)`; returns the root.
pub fn tree_merge<T, F>(mut items: Vec<T>, mut merge: F) -> Option<T>
where
    F: FnMut(&mut T, T),
{
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(mut left) = it.next() {
            if let Some(right) = it.next() {
                merge(&mut left, right);
            }
            next.push(left);
        }
        items = next;
    }
    items.pop()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_is_balanced() {
        // ((1e16 + 1) + (-1e16 + 1)) loses both ones in binary64, while a
        // left-to-right sum keeps one of them.
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(tree_sum(&xs), 0.0);
        assert_eq!(tree_sum(&[1.0, 2.0, 3.0, 4.0, 5.0]), 15.0);
        assert_eq!(tree_sum::<f64>(&[]), 0.0);
    }

    #[test]
    fn merge_matches_sum_grouping() {
        let xs: Vec<f64> = (0..13).map(|i| 1.0 / (i as f64 + 1.0)).collect();
        let merged = tree_merge(xs.clone(), |a, b| *a += b).unwrap();
        assert_eq!(merged, tree_sum(&xs));
    }
}
