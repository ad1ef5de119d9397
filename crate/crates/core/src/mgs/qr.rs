use alloc::vec::Vec;

use super::{Matrix, MgsError, TilingConfig};
use crate::exec::Executor;
use crate::reduce::tree_merge;
use crate::xprec::{ExactSum, RealScalar, Scalar};

/// The columns of `A` followed by `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedMatrix<S> {
    rows: usize,
    cols: Vec<Vec<S>>,
}

impl<S: Scalar> AugmentedMatrix<S> {
    pub fn new(a: &Matrix<S>, b: &[S]) -> Result<Self, MgsError> {
        let (m, n) = (a.rows(), a.cols());
        if n == 0 {
            return Err(MgsError::Shape("A has no columns"));
        }
        if m < n {
            return Err(MgsError::Shape("A has fewer rows than columns"));
        }
        if b.len() != m {
            return Err(MgsError::Shape("b length differs from the row count of A"));
        }
        let mut cols: Vec<Vec<S>> = a.columns().map(<[S]>::to_vec).collect();
        cols.push(b.to_vec());
        Ok(Self { rows: m, cols })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Columns of `A`, not counting `b`.
    pub fn n(&self) -> usize {
        self.cols.len() - 1
    }
}

/// `Q` (`m x n`, orthonormal columns) and `R` (`(n+1) x (n+1)`, upper
/// triangular, last column `(y, z)`).
#[derive(Debug, Clone, PartialEq)]
pub struct QRFactors<S> {
    pub q: Matrix<S>,
    pub r: Matrix<S>,
}

impl<S: Scalar> QRFactors<S> {
    pub fn n(&self) -> usize {
        self.q.cols()
    }

    /// `Q^H b`.
    pub fn y(&self) -> Vec<S> {
        let n = self.n();
        self.r.col(n)[..n].to_vec()
    }

    /// Least-squares residual norm.
    pub fn z(&self) -> S::Real {
        let n = self.n();
        self.r[(n, n)].re()
    }
}

/// `x^H y` in rounds of `K` components, each round summed exactly and the
/// round sums merged pairwise.
pub fn tiled_dot<S: Scalar>(x: &[S], y: &[S], cfg: TilingConfig) -> S {
    debug_assert_eq!(x.len(), y.len());
    let partials: Vec<ExactSum<S>> = x
        .chunks(cfg.k())
        .zip(y.chunks(cfg.k()))
        .map(|(a, b)| {
            let mut s = ExactSum::new();
            for (&u, &v) in a.iter().zip(b) {
                s.add_conj_product(u, v);
            }
            s
        })
        .collect();
    tree_merge(partials, |a, b| a.merge(&b)).map_or(S::zero(), |s| s.round())
}

fn norm<S: Scalar>(x: &[S], cfg: TilingConfig) -> S::Real {
    tiled_dot(x, x, cfg).re().sqrt()
}

struct Col<S> {
    data: Vec<S>,
    /// Coefficient of the current pivot in this column.
    r: S,
}

fn project_out<S: Scalar>(q: &[S], col: &mut Col<S>, cfg: TilingConfig) {
    let r = tiled_dot(q, &col.data, cfg);
    for (a, &qi) in col.data.iter_mut().zip(q) {
        *a -= qi * r;
    }
    col.r = r;
}

fn normalize<S: Scalar>(col: &mut [S], r: S::Real) {
    for v in col {
        *v = v.div_real(r);
    }
}

struct Setup<S: Scalar> {
    m: usize,
    n: usize,
    cols: Vec<Col<S>>,
    thresholds: Vec<S::Real>,
}

fn setup<S: Scalar>(aug: AugmentedMatrix<S>, cfg: TilingConfig) -> Setup<S> {
    let (m, n) = (aug.rows, aug.n());
    let scale = S::Real::from_f64(n as f64 * S::eps());
    let thresholds = aug.cols[..n].iter().map(|c| scale * norm(c, cfg)).collect();
    let cols = aug
        .cols
        .into_iter()
        .map(|data| Col { data, r: S::zero() })
        .collect();
    Setup {
        m,
        n,
        cols,
        thresholds,
    }
}

#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn pivot_norm<S: Scalar>(st: &Setup<S>, k: usize, cfg: TilingConfig) -> Result<S::Real, MgsError> {
    let rkk = norm(&st.cols[k].data, cfg);
    if k < st.n && !(rkk > st.thresholds[k]) {
        return Err(MgsError::Breakdown { column: k });
    }
    Ok(rkk)
}

fn finish<S: Scalar>(st: Setup<S>, r: Matrix<S>) -> QRFactors<S> {
    let q_cols: Vec<Vec<S>> = st.cols.into_iter().take(st.n).map(|c| c.data).collect();
    let q = if q_cols.is_empty() {
        Matrix::zeros(st.m, 0)
    } else {
        Matrix::from_columns(&q_cols)
    };
    QRFactors { q, r }
}

/// Modified Gram-Schmidt, normalizing each pivot before its sweep. The
/// column updates of a sweep are independent tasks on `exec`.
pub fn mgs_qr<S: Scalar, E: Executor>(
    aug: AugmentedMatrix<S>,
    cfg: TilingConfig,
    exec: &E,
) -> Result<QRFactors<S>, MgsError> {
    let mut st = setup(aug, cfg);
    let n = st.n;
    let mut r = Matrix::zeros(n + 1, n + 1);
    for k in 0..n {
        let rkk = pivot_norm(&st, k, cfg)?;
        r[(k, k)] = S::from_real(rkk);
        normalize(&mut st.cols[k].data, rkk);
        let (left, right) = st.cols.split_at_mut(k + 1);
        let pivot = &left[k].data;
        exec.for_each(right, |_, col| project_out(pivot, col, cfg));
        for (j, col) in right.iter().enumerate() {
            r[(k, k + 1 + j)] = col.r;
        }
    }
    r[(n, n)] = S::from_real(norm(&st.cols[n].data, cfg));
    Ok(finish(st, r))
}

/// Modified Gram-Schmidt with the normalization of each pivot delayed to
/// the next sweep.
///
/// Sweep `k` stores `r_kk`, then runs one task normalizing column `k - 1`
/// alongside the update tasks for columns `j > k`. Each update task divides
/// its own copy of column `k` by `r_kk`, exactly as the normalization task
/// of the next sweep will, so the factors equal those of [`mgs_qr`] bit for
/// bit. Sweep `n` handles the augmented column and the final normalization.
pub fn mgs_qr_delayed<S: Scalar, E: Executor>(
    aug: AugmentedMatrix<S>,
    cfg: TilingConfig,
    exec: &E,
) -> Result<QRFactors<S>, MgsError> {
    let mut st = setup(aug, cfg);
    let n = st.n;
    let mut r = Matrix::zeros(n + 1, n + 1);
    let mut prev = S::Real::zero();
    for k in 0..=n {
        let rkk = pivot_norm(&st, k, cfg)?;
        r[(k, k)] = S::from_real(rkk);
        let (left, right) = st.cols.split_at_mut(k);
        let (pivot, rest) = right.split_first_mut().expect("k <= n");
        let pivot = &pivot.data;
        let has_norm_task = k > 0;
        let mut tasks: Vec<&mut Col<S>> = left.last_mut().into_iter().chain(rest.iter_mut()).collect();
        exec.for_each(&mut tasks, |t, col| {
            if has_norm_task && t == 0 {
                normalize(&mut col.data, prev);
            } else {
                let mut q = pivot.clone();
                normalize(&mut q, rkk);
                project_out(&q, col, cfg);
            }
        });
        let first_update = usize::from(has_norm_task);
        for (j, col) in tasks[first_update..].iter().enumerate() {
            r[(k, k + 1 + j)] = col.r;
        }
        prev = rkk;
    }
    Ok(finish(st, r))
}

/// `max |A - QR|` over the entries of `A`, with every product rounded one
/// precision level up and the sums exact.
pub fn residual_check<S: Scalar>(a: &Matrix<S>, q: &Matrix<S>, r: &Matrix<S>) -> f64 {
    let (m, n) = (a.rows(), a.cols());
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..m {
            let mut acc = ExactSum::<S::Wider>::new();
            acc.add(a[(i, j)].widen());
            for k in 0..=j.min(q.cols() - 1) {
                acc.sub_product(q[(i, k)].widen(), r[(k, j)].widen());
            }
            worst = worst.max(acc.round().modulus().to_f64());
        }
    }
    worst
}

/// `max |Q^H Q - I|`, evaluated like [`residual_check`].
pub fn orthogonality_error<S: Scalar>(q: &Matrix<S>) -> f64 {
    let n = q.cols();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut acc = ExactSum::<S::Wider>::new();
            if i == j {
                acc.sub(S::Wider::one());
            }
            for (&a, &b) in q.col(i).iter().zip(q.col(j)) {
                acc.add_conj_product(a.widen(), b.widen());
            }
            worst = worst.max(acc.round().modulus().to_f64());
        }
    }
    worst
}
