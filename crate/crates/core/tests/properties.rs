use proptest::prelude::*;

use unclab::moments::{position_routes, HEISENBERG_TOLERANCE};
use unclab::special_fns::{morse_uncertainty, srm_uncertainty, trigamma};
use unclab::{Family, QuadratureConfig, WaveSpec};

fn family() -> impl Strategy<Value = Family> {
    let p = (-3.0f64..3.0).prop_map(f64::exp);
    prop_oneof![
        p.clone().prop_map(|a| Family::Idw { a }),
        p.clone().prop_map(|alpha| Family::DeltaWell { alpha }),
        p.clone().prop_map(|a| Family::DeltaInBox { a }),
        p.prop_map(|alpha| Family::Lorentzian { alpha }),
        Just(Family::HarmonicOscillator),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn routes_agree_and_respect_the_bound(f in family()) {
        let state = WaveSpec::new(f).unwrap();
        let [a, b] = position_routes(&state, &QuadratureConfig::default()).unwrap();
        prop_assert!((a.uncertainty() - b.uncertainty()).abs() < 1e-8);
        prop_assert!(a.uncertainty() >= 0.5 - HEISENBERG_TOLERANCE);
        let closed = state.closed_u().unwrap();
        prop_assert!((a.uncertainty() - closed).abs() < 1e-8);
    }

    #[test]
    fn normalization_holds(f in family()) {
        let state = WaveSpec::new(f).unwrap();
        let n = unclab::quadrature::integrate(
            |x| state.evaluate(x).powi(2),
            state.domain(),
            &state.breakpoints(),
            &QuadratureConfig::default(),
        ).unwrap();
        prop_assert!((n.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn trigamma_recurrence(z in 0.05f64..500.0) {
        let lhs = trigamma(z).unwrap().value;
        let rhs = trigamma(z + 1.0).unwrap().value + 1.0 / (z * z);
        prop_assert!(((lhs - rhs) / lhs).abs() < 1e-13);
    }

    #[test]
    fn closed_products_stay_above_half(s in 0.01f64..1e8, lambda in 0.501f64..1e8) {
        prop_assert!(srm_uncertainty(s).unwrap() >= 0.5);
        prop_assert!(morse_uncertainty(lambda).unwrap() >= 0.5);
    }
}
