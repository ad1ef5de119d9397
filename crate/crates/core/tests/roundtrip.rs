mod common;

use polynewt_core::{DoubleDouble, QuadDouble, RealScalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn f64_canonical_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
        let text = x.to_canonical();
        prop_assert_eq!(f64::parse_decimal(&text).unwrap(), x);
    }

    #[test]
    fn dd_canonical_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = common::random_dd(&mut rng);
        let text = x.to_canonical();
        let back = DoubleDouble::parse_decimal(&text).unwrap();
        prop_assert_eq!(back, x, "{}", text);
        prop_assert_eq!(back.to_canonical(), text);
    }

    #[test]
    fn qd_canonical_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = common::random_qd(&mut rng);
        let text = x.to_canonical();
        let back = QuadDouble::parse_decimal(&text).unwrap();
        prop_assert_eq!(back, x, "{}", text);
        prop_assert_eq!(back.to_canonical(), text);
    }

    #[test]
    fn display_digits_are_stable(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = common::random_dd(&mut rng);
        let shown = x.to_string();
        let again = DoubleDouble::parse_decimal(&shown).unwrap().to_string();
        prop_assert_eq!(again, shown);
    }

    #[test]
    fn short_literals_parse_to_nearest(int in -10_000i64..10_000, frac in 0u32..1000) {
        let text = format!("{int}.{frac:03}");
        let x = DoubleDouble::parse_decimal(&text).unwrap();
        let back = x.to_canonical();
        prop_assert_eq!(DoubleDouble::parse_decimal(&back).unwrap(), x);
        prop_assert_eq!(x.hi, text.parse::<f64>().unwrap());
    }
}
