use polynewt_core::evaldiff::{eval_product_tree, gradient_from_tree, speelpenning_sequential, tree_gradient_mults, EvalPlan, OpCounter};
use polynewt_core::mgs::{least_squares_solve, mgs_qr, mgs_qr_delayed, AugmentedMatrix, Matrix, TilingConfig, Variant};
use polynewt_core::polyrep::{decompose, Monomial, PolySystem};
use polynewt_core::{Complex, DoubleDouble, Serial, Shuffled};
use proptest::prelude::*;

fn small_ints(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-3i32..=3).prop_map(f64::from), 1..max_len)
}

fn monomial_factors() -> impl Strategy<Value = Vec<(usize, u32)>> {
    prop::collection::vec((0usize..12, 0u32..5), 0..10)
}

proptest! {
    #[test]
    fn decomposition_recomposes(factors in monomial_factors()) {
        let m = Monomial::new(1.0f64, factors).unwrap();
        let dec = decompose(&m);
        prop_assert_eq!(dec.recompose(), m.exponents().to_vec());
        prop_assert!(dec.common_factor.iter().all(|&(_, e)| e >= 1));
        prop_assert_eq!(dec.distinct_vars.len(), m.exponents().len());
    }

    #[test]
    fn tree_gradient_is_leave_one_out(v in small_ints(24)) {
        let mut c = OpCounter::default();
        let (mut tree, p) = eval_product_tree(&v, &mut c).unwrap();
        prop_assert_eq!(p, v.iter().product::<f64>());
        prop_assert_eq!(c.eval, v.len() as u64 - 1);
        let g = gradient_from_tree(&mut tree, &mut c).to_vec();
        prop_assert_eq!(c.grad, tree_gradient_mults(v.len()));
        for (i, &gi) in g.iter().enumerate() {
            let expect: f64 = v.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x).product();
            prop_assert_eq!(gi, expect, "slot {}", i);
        }
        if v.len() >= 2 {
            let (q, h) = speelpenning_sequential(&v, &mut OpCounter::default()).unwrap();
            prop_assert_eq!(q, p);
            prop_assert_eq!(h, g);
        }
    }

    #[test]
    fn plan_matches_naive_on_integers(
        polys in prop::collection::vec(prop::collection::vec(((-4i32..=4), monomial_factors()), 1..6), 1..4),
        x in prop::collection::vec((-2i32..=2).prop_map(f64::from), 12),
    ) {
        let polys: Vec<Vec<Monomial<f64>>> = polys
            .into_iter()
            .map(|p| p.into_iter().map(|(c, f)| Monomial::new(f64::from(c), f).unwrap()).collect())
            .collect();
        let sys = PolySystem::new(12, polys).unwrap();
        let a = EvalPlan::new(&sys).evaluate(&x, &Shuffled::new(5)).unwrap();
        prop_assert_eq!(&a.values, &sys.eval_naive(&x).unwrap());
        let b = EvalPlan::new(&sys).evaluate(&x, &Serial).unwrap();
        prop_assert_eq!(a.jacobian, b.jacobian);
    }

    #[test]
    fn factors_do_not_depend_on_tiling_or_schedule(
        seed in any::<u64>(),
        m in 3usize..14,
        k in 1usize..20,
    ) {
        type C = Complex<DoubleDouble>;
        let n = m - 1;
        let entry = |i: usize, j: usize| {
            let t = (seed % 997) as f64 + (i * 13 + j * 7) as f64;
            C::new(DoubleDouble::from(t.sin()), DoubleDouble::from((1.3 * t).cos()))
        };
        let a = Matrix::from_fn(m, n, entry);
        let b: Vec<C> = (0..m).map(|i| entry(i, n)).collect();
        let base = mgs_qr(AugmentedMatrix::new(&a, &b).unwrap(), TilingConfig::new(1).unwrap(), &Serial).unwrap();
        let cfg = TilingConfig::new(k).unwrap();
        let imm = mgs_qr(AugmentedMatrix::new(&a, &b).unwrap(), cfg, &Shuffled::new(seed)).unwrap();
        let del = mgs_qr_delayed(AugmentedMatrix::new(&a, &b).unwrap(), cfg, &Shuffled::new(seed ^ 1)).unwrap();
        prop_assert!(imm == base);
        prop_assert!(del == base);
        let x1 = least_squares_solve(&a, &b, cfg, Variant::Delayed, &Shuffled::new(seed)).unwrap().x;
        let x2 = least_squares_solve(&a, &b, TilingConfig::new(1).unwrap(), Variant::Immediate, &Serial).unwrap().x;
        prop_assert_eq!(x1, x2);
    }
}
