use std::f64::consts::PI;

use num_complex::Complex64;
use unclab::asymptotics::{limit_scan, LimitFamily};
use unclab::fourier::{momentum_moments, transform};
use unclab::moments::position_routes;
use unclab::quadrature::integrate_oscillatory;
use unclab::special_fns::gamma_half_line_abs_sq;
use unclab::{uncertainty, Family, Interval, QuadratureConfig, WaveSpec};

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn closed_forms_match_catalog_quadrature() {
    let srm = limit_scan(LimitFamily::Srm, &[1.0, 2.0]).unwrap();
    for (s, u) in [1.0, 2.0].into_iter().zip(srm.u_values) {
        let r = uncertainty(&WaveSpec::new(Family::Srm { s }).unwrap(), &cfg(), None).unwrap();
        assert!((r.u - u).abs() < 1e-8, "s={s}: {} vs {u}", r.u);
    }
    let morse = limit_scan(LimitFamily::Morse, &[1.0]).unwrap();
    let r = uncertainty(&WaveSpec::new(Family::Morse { lambda: 1.0 }).unwrap(), &cfg(), None).unwrap();
    assert!((r.u - morse.u_values[0]).abs() < 1e-8);
}

#[test]
fn gamma_modulus_against_euler_integral() {
    // Γ(½ + i) = ∫ exp(s/2 − eˢ) e^{is} ds after t = eˢ.
    let g = integrate_oscillatory(|s: f64| (0.5 * s - s.exp()).exp(), -1.0, Interval::real_line(), &[], &cfg()).unwrap();
    let gamma: Complex64 = g.value;
    assert!((gamma.norm_sqr() - gamma_half_line_abs_sq(1.0)).abs() < 1e-10, "{gamma}");
    assert!((gamma_half_line_abs_sq(1.0) - PI / PI.cosh()).abs() < 1e-15);
}

#[test]
fn duality_pair_across_representations() {
    // The Lorentzian is the delta-well momentum wavefunction read as a function of x.
    for alpha in [0.5, 1.0, 3.0] {
        let lor = WaveSpec::new(Family::Lorentzian { alpha }).unwrap();
        let well = WaveSpec::new(Family::DeltaWell { alpha }).unwrap();
        let lor_pos = position_routes(&lor, &cfg()).unwrap()[0];
        let well_pos = position_routes(&well, &cfg()).unwrap()[0];
        assert!((lor_pos.dx() - well_pos.dp()).abs() < 1e-6);
        assert!((lor_pos.dp() - well_pos.dx()).abs() < 1e-6);
        for x in [0.0, 0.4, 2.5] {
            let phi = transform(&well, x).unwrap();
            assert!((phi.re - lor.evaluate(x)).abs() < 1e-9);
        }
        let well_mom = momentum_moments(&well, 500.0 * alpha, &cfg()).unwrap();
        assert!((well_mom.set.dp() - lor_pos.dx()).abs() < 1e-6, "{well_mom:?}");
    }
}

#[test]
fn uncertainty_is_scale_free() {
    for a in [0.01, 1.0, 70.0] {
        let idw = uncertainty(&WaveSpec::new(Family::Idw { a }).unwrap(), &cfg(), None).unwrap();
        assert!((idw.u - 0.5 * ((PI * PI - 6.0) / 3.0).sqrt()).abs() < 1e-9);
        assert!((idw.dx / a - idw.dx * idw.dp / (a * idw.dp)).abs() < 1e-12);
        let boxed = uncertainty(&WaveSpec::new(Family::DeltaInBox { a }).unwrap(), &cfg(), None).unwrap();
        assert!((boxed.u - 0.3f64.sqrt()).abs() < 1e-9);
    }
}
