//! Gauss-Newton driver and Newton homotopies.
//!
//! A step evaluates `f` and `J_f` at `x`, solves `J_f dx = -f` in the
//! least-squares sense and sets `x = x + dx`. The evaluation and the solve
//! are separate stages that hand off a [`SystemEvaluation`], so either can
//! run on its own executor.

use alloc::vec::Vec;

use crate::evaldiff::{EvalError, EvalPlan, OpCounter, SystemEvaluation};
use crate::exec::Executor;
use crate::mgs::{least_squares_solve, MgsError, TilingConfig, Variant};
use crate::polyrep::{Monomial, PolyError, PolySystem};
use crate::xprec::{RealScalar, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NewtonError {
    #[error("iteration {iter}: {source}")]
    Eval { iter: usize, source: EvalError },
    #[error("iteration {iter}: {source}")]
    Solve { iter: usize, source: MgsError },
    #[error("invalid configuration: {0}")]
    Config(&'static str),
    #[error("{have} residual norms above the floor, at least {need} required")]
    TraceTooShort { have: usize, need: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl NewtonError {
    /// Module that raised the underlying error.
    pub fn module(&self) -> &'static str {
        match self {
            NewtonError::Eval { .. } => "evaldiff",
            NewtonError::Solve { .. } => "mgs",
            NewtonError::Poly(_) => "polyrep",
            _ => "newton",
        }
    }

    /// Iteration at which a step failed.
    pub fn iteration(&self) -> Option<usize> {
        match self {
            NewtonError::Eval { iter, .. } | NewtonError::Solve { iter, .. } => Some(*iter),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    pub max_iters: usize,
    pub tiling: TilingConfig,
    pub variant: Variant,
    /// Bound on `||dx||_inf`; `None` means `10 eps (1 + ||x||_inf)`.
    pub stop_tolerance: Option<f64>,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            max_iters: 10,
            tiling: TilingConfig::default(),
            variant: Variant::Immediate,
            stop_tolerance: None,
        }
    }
}

impl NewtonConfig {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate<S: Scalar>(&self) -> Result<(), NewtonError> {
        if let Some(tol) = self.stop_tolerance {
            if !(tol >= S::eps()) {
                return Err(NewtonError::Config(
                    "stop tolerance is below the unit roundoff of the working precision",
                ));
            }
        }
        Ok(())
    }
}

/// Stages of a Newton step, for timing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Evaluate,
    Solve,
    Update,
}

/// Hook around each stage of a step. The default runs the stage untimed.
pub trait PhaseTimer {
    fn time<R>(&mut self, phase: Phase, f: impl FnOnce() -> R) -> R {
        let _ = phase;
        f()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NoTimer;

impl PhaseTimer for NoTimer {}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry<S: Scalar> {
    pub iter: usize,
    /// `||f(x)||_inf` before the update.
    pub f_norm: S::Real,
    pub dx_norm: S::Real,
    pub b0: S,
    pub dx0: S,
    /// First component of `x` after the update.
    pub x0: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace<S: Scalar> {
    pub entries: Vec<TraceEntry<S>>,
    /// `||f||_inf` at the returned point.
    pub final_f_norm: S::Real,
    pub counts: OpCounter,
    /// Whether the step-size test stopped the iteration.
    pub converged: bool,
}

impl<S: Scalar> IterationTrace<S> {
    /// Residual norms of every iterate including the final one.
    pub fn f_norms(&self) -> Vec<f64> {
        self.entries
            .iter()
            .map(|e| e.f_norm.to_f64())
            .chain(core::iter::once(self.final_f_norm.to_f64()))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct NewtonResult<S: Scalar> {
    pub x: Vec<S>,
    pub trace: IterationTrace<S>,
}

pub fn inf_norm<S: Scalar>(v: &[S]) -> S::Real {
    v.iter().fold(S::Real::zero(), |m, x| m.max(x.modulus()))
}

/// Solve and update stages of a step, from an evaluation at `x`.
fn solve_and_update<S: Scalar, E: Executor, T: PhaseTimer>(
    eval: SystemEvaluation<S>,
    x: &[S],
    iter: usize,
    cfg: &NewtonConfig,
    exec: &E,
    timer: &mut T,
) -> Result<(Vec<S>, TraceEntry<S>), NewtonError> {
    let b: Vec<S> = eval.values.iter().map(|&v| -v).collect();
    let sol = timer
        .time(Phase::Solve, || {
            least_squares_solve(&eval.jacobian, &b, cfg.tiling, cfg.variant, exec)
        })
        .map_err(|source| NewtonError::Solve { iter, source })?;
    let dx = sol.x;
    let x_next: Vec<S> = timer.time(Phase::Update, || x.iter().zip(&dx).map(|(&a, &d)| a + d).collect());
    let entry = TraceEntry {
        iter,
        f_norm: inf_norm(&eval.values),
        dx_norm: inf_norm(&dx),
        b0: b[0],
        dx0: dx[0],
        x0: x_next[0],
    };
    Ok((x_next, entry))
}

fn evaluate<S: Scalar, E: Executor, T: PhaseTimer>(
    plan: &EvalPlan<S>,
    x: &[S],
    iter: usize,
    exec: &E,
    timer: &mut T,
) -> Result<SystemEvaluation<S>, NewtonError> {
    timer
        .time(Phase::Evaluate, || plan.evaluate(x, exec))
        .map_err(|source| NewtonError::Eval { iter, source })
}

/// One Newton step; returns the new point, its trace entry and the
/// multiplications spent in evaluation.
pub fn newton_step<S: Scalar, E: Executor, T: PhaseTimer>(
    plan: &EvalPlan<S>,
    x: &[S],
    cfg: &NewtonConfig,
    exec: &E,
    timer: &mut T,
) -> Result<(Vec<S>, TraceEntry<S>, OpCounter), NewtonError> {
    let eval = evaluate(plan, x, 0, exec, timer)?;
    let counts = eval.counts;
    let (x_next, entry) = solve_and_update(eval, x, 0, cfg, exec, timer)?;
    Ok((x_next, entry, counts))
}

/// Iterates until `max_iters` steps or until `||dx||_inf` falls to the stop
/// tolerance, then evaluates once more for the final residual.
pub fn run_newton<S: Scalar, E: Executor, T: PhaseTimer>(
    sys: &PolySystem<S>,
    x0: &[S],
    cfg: &NewtonConfig,
    exec: &E,
    timer: &mut T,
) -> Result<NewtonResult<S>, NewtonError> {
    cfg.validate::<S>()?;
    sys.check_point(x0)?;
    let plan = EvalPlan::new(sys);
    let mut x = x0.to_vec();
    let mut entries = Vec::with_capacity(cfg.max_iters);
    let mut counts = OpCounter::default();
    let mut converged = false;
    for iter in 0..cfg.max_iters {
        let eval = evaluate(&plan, &x, iter, exec, timer)?;
        counts.absorb(eval.counts);
        let (x_next, entry) = solve_and_update(eval, &x, iter, cfg, exec, timer)?;
        let tol = cfg
            .stop_tolerance
            .unwrap_or_else(|| 10.0 * S::eps() * (1.0 + inf_norm(&x_next).to_f64()));
        let small = entry.dx_norm.to_f64() <= tol;
        entries.push(entry);
        x = x_next;
        if small {
            converged = true;
            break;
        }
    }
    let last = evaluate(&plan, &x, entries.len(), exec, timer)?;
    counts.absorb(last.counts);
    Ok(NewtonResult {
        trace: IterationTrace {
            entries,
            final_f_norm: inf_norm(&last.values),
            counts,
            converged,
        },
        x,
    })
}

/// Start point `z` and parameter `t` of the homotopy `f(x) - t f(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomotopyParams<S: Scalar> {
    pub z: Vec<S>,
    pub t: S::Real,
}

/// The system `f_i(x) - t f_i(z)`: each polynomial gets the constant
/// `-t f_i(z)`, so `z` solves it at `t = 1`.
pub fn homotopy_start_system<S: Scalar, E: Executor>(
    sys: &PolySystem<S>,
    params: &HomotopyParams<S>,
    exec: &E,
) -> Result<PolySystem<S>, NewtonError> {
    if !(params.t > S::Real::zero() && params.t < S::Real::one()) {
        return Err(NewtonError::Config("homotopy parameter t must lie in (0, 1)"));
    }
    sys.check_point(&params.z)?;
    let fz = EvalPlan::new(sys)
        .evaluate(&params.z, exec)
        .map_err(|source| NewtonError::Eval { iter: 0, source })?
        .values;
    let polys = sys
        .polys()
        .iter()
        .zip(&fz)
        .map(|(p, &v)| {
            let mut p = p.clone();
            p.push(Monomial::constant(-v.scale(params.t)));
            p
        })
        .collect();
    Ok(PolySystem::new(sys.n_vars(), polys)?)
}

/// `||f||_{k+1} / ||f||_k^2` for consecutive norms that both lie above
/// `floor`, taken from the leading run of such norms.
pub fn convergence_ratios(norms: &[f64], floor: f64) -> Result<Vec<f64>, NewtonError> {
    let above = norms.iter().take_while(|&&f| f > floor).count();
    if above < 3 {
        return Err(NewtonError::TraceTooShort { have: above, need: 3 });
    }
    Ok(norms[..above].windows(2).map(|w| w[1] / (w[0] * w[0])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Serial;
    use crate::xprec::DoubleDouble;
    use alloc::vec;

    fn mon<S: Scalar>(c: S, e: &[(usize, u32)]) -> Monomial<S> {
        Monomial::new(c, e.iter().copied()).unwrap()
    }

    #[test]
    fn square_root_of_two_step() {
        let sys = PolySystem::new(1, vec![vec![mon(1.0, &[(0, 2)]), mon(-2.0, &[])]]).unwrap();
        let plan = EvalPlan::new(&sys);
        let (x, e, _) = newton_step(&plan, &[1.5], &NewtonConfig::default(), &Serial, &mut NoTimer).unwrap();
        assert!((x[0] - 17.0 / 12.0).abs() < 1e-15);
        assert_eq!(e.b0, -0.25);
    }

    #[test]
    fn affine_system_in_one_step() {
        type D = DoubleDouble;
        let d = |v: f64| D::from(v);
        // 2x + y - 1 = 0, x - 3y + 2 = 0
        let sys = PolySystem::new(
            2,
            vec![
                vec![mon(d(2.0), &[(0, 1)]), mon(d(1.0), &[(1, 1)]), mon(d(-1.0), &[])],
                vec![mon(d(1.0), &[(0, 1)]), mon(d(-3.0), &[(1, 1)]), mon(d(2.0), &[])],
            ],
        )
        .unwrap();
        let cfg = NewtonConfig {
            max_iters: 1,
            ..NewtonConfig::default()
        };
        let r = run_newton(&sys, &[d(10.0), d(-4.0)], &cfg, &Serial, &mut NoTimer).unwrap();
        assert_eq!(r.trace.entries.len(), 1);
        assert!(r.trace.final_f_norm.to_f64() < 1e-30);
    }

    #[test]
    fn converged_start_stops_after_one_step() {
        let sys = PolySystem::new(1, vec![vec![mon(1.0, &[(0, 1)]), mon(-1.0, &[])]]).unwrap();
        let r = run_newton(&sys, &[1.0], &NewtonConfig::default(), &Serial, &mut NoTimer).unwrap();
        assert_eq!(r.trace.entries.len(), 1);
        assert!(r.trace.converged);
    }

    #[test]
    fn zero_iterations_only_evaluate() {
        let sys = PolySystem::new(1, vec![vec![mon(1.0, &[(0, 2)]), mon(-2.0, &[])]]).unwrap();
        let cfg = NewtonConfig {
            max_iters: 0,
            ..NewtonConfig::default()
        };
        let r = run_newton(&sys, &[3.0], &cfg, &Serial, &mut NoTimer).unwrap();
        assert!(r.trace.entries.is_empty());
        assert_eq!(r.trace.final_f_norm, 7.0);
        assert_eq!(r.x, [3.0]);
    }

    #[test]
    fn ratios() {
        let r = convergence_ratios(&[1e-2, 1e-4, 1e-8], 0.0).unwrap();
        assert!(r.iter().all(|&q| (q - 1.0).abs() < 1e-12));
        assert!(convergence_ratios(&[1.0, 0.5], 0.0).is_err());
        assert!(convergence_ratios(&[1.0, 0.5, 1e-40, 1e-40], 1e-30).is_err());
    }

    #[test]
    fn homotopy_identity() {
        let sys = PolySystem::new(
            2,
            vec![
                vec![mon(1.0, &[(0, 2)]), mon(1.0, &[(1, 1)]), mon(-3.0, &[])],
                vec![mon(2.0, &[(0, 1), (1, 1)])],
            ],
        )
        .unwrap();
        let params = HomotopyParams {
            z: vec![0.5, -1.25],
            t: 0.75,
        };
        let h = homotopy_start_system(&sys, &params, &Serial).unwrap();
        let fz = sys.eval_naive(&params.z).unwrap();
        let hz = h.eval_naive(&params.z).unwrap();
        for (a, b) in fz.iter().zip(&hz) {
            assert!((b - 0.25 * a).abs() < 1e-15);
        }
        let bad = HomotopyParams { z: vec![0.0, 0.0], t: 1.0 };
        assert!(homotopy_start_system(&sys, &bad, &Serial).is_err());
    }
}
