mod common;

use common::dyadic::Dyadic;
use common::{random_dd, random_qd, wide_f64};
use polynewt_core::xprec::eft::{two_prod, two_sum};
use polynewt_core::{Complex, DoubleDouble, Precision, QuadDouble, RealScalar, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TRIALS: usize = 20_000;

fn dd_exact(x: DoubleDouble) -> Dyadic {
    Dyadic::sum_of(&[x.hi, x.lo])
}

fn qd_exact(x: QuadDouble) -> Dyadic {
    Dyadic::sum_of(&x.0)
}

fn dd_non_overlapping(x: DoubleDouble) -> bool {
    x.hi + x.lo == x.hi
}

fn qd_non_overlapping(x: QuadDouble) -> bool {
    x.0.windows(2).all(|w| w[0] + w[1] == w[0])
}

#[test]
fn error_free_transformations_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..TRIALS {
        let a = wide_f64(&mut rng, 60);
        let b = wide_f64(&mut rng, 60);
        let (s, e) = two_sum(a, b);
        assert_eq!(s, a + b);
        assert_eq!(Dyadic::sum_of(&[s, e]), Dyadic::sum_of(&[a, b]));
        let (p, e) = two_prod(a, b);
        assert_eq!(p, a * b);
        assert_eq!(
            Dyadic::sum_of(&[p, e]),
            Dyadic::from_f64(a) * Dyadic::from_f64(b)
        );
    }
    let x = 2f64.powi(27) + 1.0;
    let (p, e) = two_prod(x, x);
    assert_eq!(p, 2f64.powi(54) + 2f64.powi(28));
    assert_eq!(e, 1.0);
    assert_eq!(two_sum(1.0, 2f64.powi(-60)), (1.0, 2f64.powi(-60)));
}

#[test]
fn double_double_against_exact_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let bound = 8.0 * Precision::DD.eps();
    for _ in 0..TRIALS {
        let (a, b) = (random_dd(&mut rng), random_dd(&mut rng));
        let (xa, xb) = (dd_exact(a), dd_exact(b));
        for (name, got, exact) in [
            ("add", a + b, xa.clone() + xb.clone()),
            ("sub", a - b, xa.clone() - xb.clone()),
            ("mul", a * b, xa.clone() * xb.clone()),
        ] {
            let err = dd_exact(got).rel_err(&exact);
            assert!(err <= bound, "{name}: {a:?} {b:?} err {err:e}");
            assert!(dd_non_overlapping(got));
        }
        let q = a / b;
        // |q - a/b| / |a/b| = |q b - a| / |a|
        let err = (dd_exact(q) * xb.clone()).rel_err(&xa);
        assert!(err <= bound, "div: {a:?} {b:?} err {err:e}");
        assert!(dd_non_overlapping(q));
    }
}

#[test]
fn quad_double_against_exact_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let bound = 8.0 * Precision::QD.eps();
    for _ in 0..TRIALS {
        let (a, b) = (random_qd(&mut rng), random_qd(&mut rng));
        let (xa, xb) = (qd_exact(a), qd_exact(b));
        for (name, got, exact) in [
            ("add", a + b, xa.clone() + xb.clone()),
            ("sub", a - b, xa.clone() - xb.clone()),
            ("mul", a * b, xa.clone() * xb.clone()),
        ] {
            let err = qd_exact(got).rel_err(&exact);
            assert!(err <= bound, "{name}: {a:?} {b:?} err {err:e}");
            assert!(qd_non_overlapping(got), "{name}: {got:?}");
        }
        let q = a / b;
        let err = (qd_exact(q) * xb.clone()).rel_err(&xa);
        assert!(err <= bound, "div: {a:?} {b:?} err {err:e}");
        assert!(qd_non_overlapping(q));
    }
}

#[test]
fn quad_double_sum_cancellation() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10_000 {
        let (a, b) = (random_qd(&mut rng), random_qd(&mut rng));
        let s = a + b;
        let back = s - a - b;
        let scale = s.abs().to_f64().max(a.abs().to_f64()).max(b.abs().to_f64());
        assert!(back.abs().to_f64() <= 8.0 * Precision::QD.eps() * scale);
    }
}

#[test]
fn square_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5_000 {
        let a = random_dd(&mut rng).abs();
        let r = a.sqrt();
        let err = (dd_exact(r) * dd_exact(r)).rel_err(&dd_exact(a));
        assert!(err <= 2.0 * 8.0 * Precision::DD.eps(), "{a:?}: {err:e}");
        let a = random_qd(&mut rng).abs();
        let r = a.sqrt();
        let err = (qd_exact(r) * qd_exact(r)).rel_err(&qd_exact(a));
        assert!(err <= 2.0 * 8.0 * Precision::QD.eps(), "{a:?}: {err:e}");
    }
}

#[test]
fn complex_round_trip() {
    type C = Complex<DoubleDouble>;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..5_000 {
        let z = C::new(random_dd(&mut rng), random_dd(&mut rng));
        let w = C::new(random_dd(&mut rng), random_dd(&mut rng));
        let back = (z * w) / w;
        let err = (back - z).modulus().to_f64() / z.modulus().to_f64();
        assert!(err <= 16.0 * Precision::DD.eps(), "{err:e}");
        assert!(z.conj().conj() == z);
        assert!(z.modulus() >= DoubleDouble::zero());
    }
}
