//! Wall-clock time per Newton phase.

use std::time::{Duration, Instant};

use polynewt_core::newton::{Phase, PhaseTimer};
use serde::Serialize;

#[derive(Debug, Clone, Copy, Default)]
pub struct PhaseClock {
    pub evaluate: Duration,
    pub solve: Duration,
    pub update: Duration,
}

impl PhaseTimer for PhaseClock {
    fn time<R>(&mut self, phase: Phase, f: impl FnOnce() -> R) -> R {
        let start = Instant::now();
        let r = f();
        let spent = start.elapsed();
        match phase {
            Phase::Evaluate => self.evaluate += spent,
            Phase::Solve => self.solve += spent,
            Phase::Update => self.update += spent,
        }
        r
    }
}

/// Seconds per phase, their total and each phase's share of it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimingReport {
    pub evaluate_s: f64,
    pub solve_s: f64,
    pub update_s: f64,
    pub total_s: f64,
    pub evaluate_fraction: f64,
    pub solve_fraction: f64,
    pub update_fraction: f64,
}

pub fn timing_report(phases: &PhaseClock) -> TimingReport {
    let (e, s, u) = (
        phases.evaluate.as_secs_f64(),
        phases.solve.as_secs_f64(),
        phases.update.as_secs_f64(),
    );
    let total = e + s + u;
    let share = |x: f64| if total > 0.0 { x / total } else { 0.0 };
    TimingReport {
        evaluate_s: e,
        solve_s: s,
        update_s: u,
        total_s: total,
        evaluate_fraction: share(e),
        solve_fraction: share(s),
        update_fraction: share(u),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_sums_phases() {
        let clock = PhaseClock {
            evaluate: Duration::from_millis(30),
            solve: Duration::from_millis(60),
            update: Duration::from_millis(10),
        };
        let r = timing_report(&clock);
        assert!((r.total_s - 0.1).abs() < 1e-12);
        assert!((r.solve_fraction - 0.6).abs() < 1e-12);
        let zero = timing_report(&PhaseClock::default());
        assert_eq!((zero.total_s, zero.evaluate_fraction), (0.0, 0.0));
    }

    #[test]
    fn clock_accumulates() {
        let mut c = PhaseClock::default();
        let v = c.time(Phase::Solve, || 7);
        c.time(Phase::Solve, || std::thread::sleep(Duration::from_millis(2)));
        assert_eq!(v, 7);
        assert!(c.solve >= Duration::from_millis(2));
        assert_eq!(c.evaluate, Duration::ZERO);
    }
}
