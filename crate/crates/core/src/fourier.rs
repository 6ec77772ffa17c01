//! Momentum representation: φ(p) = (2π)^{-1/2} ∫ ψ(x) e^{−ipx} dx, evaluated
//! pointwise by oscillatory quadrature, and moments computed from it.
//!
//! In momentum space x acts as i∂_p, so with χ(p) = FT(xψ) = iφ′(p)
//!
//! ```text
//! ⟨x⟩ = ∫ Re(φ̄χ) dp,   ⟨x²⟩ = ∫ |χ|² dp,   ⟨p²⟩ = ∫ p²|φ|² dp.
//! ```
//!
//! For a real state φ(−p) = conj φ(p), so every integrand above is even and
//! only [0, p_max] is integrated; ⟨p⟩ vanishes identically.
//!
//! Truncation at p_max matters for kinked states. A jump J_k in ψ′ at x_k
//! puts J_k·δ(x − x_k) into ψ″, so
//!
//! ```text
//! φ(p) ≈ −(2π)^{-1/2} Σ_k J_k e^{−ipx_k} / p²
//! ```
//!
//! and p²|φ|² falls off only like 1/p². The missing tail is added from this
//! model in closed form. How well the model describes the actual integrand
//! is measured on [p_max/2, p_max], and that discrepancy is the reported
//! tail bound. Smooth states decay exponentially and the bound comes from
//! extrapolating the last half of the window.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::{config_for, position_routes, Moment, MomentSet, Route};
use crate::quadrature::{integrate_oscillatory_vec, integrate_vec, IntegralResult, Interval, QuadratureConfig};
use crate::state_catalog::{StateKind, WaveSpec};

/// p_max for kinked states, in units of 1/length_scale.
pub const KINKED_P_MAX: f64 = 500.0;
/// p_max for smooth states, in units of 1/length_scale.
pub const SMOOTH_P_MAX: f64 = 10.0;
/// Relative tail bound on ⟨p²⟩ above which a momentum moment set is flagged.
pub const TAIL_TOLERANCE: f64 = 1e-6;

/// Momentum-route agreement required of smooth states.
pub const SMOOTH_EQUIVALENCE_TOL: f64 = 1e-8;
/// Momentum-route agreement required of kinked states.
pub const KINKED_EQUIVALENCE_TOL: f64 = 5e-3;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const OUTER_BUDGET: usize = 8000;

/// p_max used when the caller does not supply one.
pub fn default_p_max(state: &WaveSpec) -> f64 {
    let k = if state.is_smooth() { SMOOTH_P_MAX } else { KINKED_P_MAX };
    k / state.length_scale()
}

fn check_p_max(p_max: f64) -> Result<()> {
    if !p_max.is_finite() || p_max <= 0.0 {
        return Err(Error::Domain(format!("p_max must be positive and finite, got {p_max}")));
    }
    Ok(())
}

/// Inner config: panels for a transform at |p| ≤ p_max fit in the budget.
fn transform_config(state: &WaveSpec, p_max: f64, cfg: &QuadratureConfig) -> QuadratureConfig {
    let base = config_for(state, cfg);
    let d = state.domain();
    let span = if d.is_finite() { d.hi - d.lo } else { 1600.0 / p_max.max(1e-300) };
    let oscillation = (span * p_max / PI).min(1e8) as usize;
    base.with_budget(base.max_subdivisions.max(2 * oscillation + 2000))
}

fn pair(state: &WaveSpec, p: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<[Complex64; 2]>> {
    let mut r = integrate_oscillatory_vec(
        |x| {
            let v = state.evaluate(x);
            [v, x * v]
        },
        p,
        state.domain(),
        &state.breakpoints(),
        cfg,
    )?;
    r.value = [r.value[0] * INV_SQRT_2PI, r.value[1] * INV_SQRT_2PI];
    r.est_error *= INV_SQRT_2PI;
    Ok(r)
}

/// φ(p).
pub fn transform(state: &WaveSpec, p: f64) -> Result<Complex64> {
    transform_with(state, p, &QuadratureConfig::default())
}

pub fn transform_with(state: &WaveSpec, p: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    if !p.is_finite() {
        return Err(Error::Domain(format!("p must be finite, got {p}")));
    }
    let cfg = transform_config(state, p.abs().max(1.0), cfg);
    Ok(pair(state, p, &cfg)?.value[0])
}

/// (φ(p), χ(p)) with χ the transform of xψ.
pub fn transform_pair(state: &WaveSpec, p: f64, cfg: &QuadratureConfig) -> Result<(Complex64, Complex64)> {
    if !p.is_finite() {
        return Err(Error::Domain(format!("p must be finite, got {p}")));
    }
    let cfg = transform_config(state, p.abs().max(1.0), cfg);
    let v = pair(state, p, &cfg)?.value;
    Ok((v[0], v[1]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiResidual {
    /// max ||φ| − |φ₀||
    pub max_modulus: f64,
    /// max ||φ|² − |φ₀|²|
    pub max_modulus_sq: f64,
    /// grid point where the modulus residual peaks
    pub worst_p: f64,
}

/// Compares the numerical transform against the closed-form φ₀ in modulus.
pub fn closed_phi_residual(state: &WaveSpec, p_grid: &[f64]) -> Result<PhiResidual> {
    if state.closed_phi_modulus(0.0).is_none() {
        return Err(Error::UnsupportedCatalog(format!("{} has no closed-form momentum wavefunction", state.kind())));
    }
    let pmax = p_grid.iter().fold(1.0f64, |m, p| m.max(p.abs()));
    let cfg = transform_config(state, pmax, &QuadratureConfig::default());
    let rows: Vec<(f64, f64, f64)> = p_grid
        .par_iter()
        .map(|&p| {
            let num = pair(state, p, &cfg)?.value[0].norm();
            let exact = state.closed_phi_modulus(p).unwrap_or(f64::NAN);
            Ok((p, (num - exact).abs(), (num * num - exact * exact).abs()))
        })
        .collect::<Result<_>>()?;
    let mut out = PhiResidual { max_modulus: 0.0, max_modulus_sq: 0.0, worst_p: p_grid.first().copied().unwrap_or(0.0) };
    for (p, m, m2) in rows {
        if m > out.max_modulus {
            out.max_modulus = m;
            out.worst_p = p;
        }
        out.max_modulus_sq = out.max_modulus_sq.max(m2);
    }
    Ok(out)
}

/// ∫_P^∞ cos(pd)/pⁿ dp to two orders in 1/P (exact for d = 0).
fn cos_tail(n: i32, big_p: f64, d: f64) -> f64 {
    if d == 0.0 {
        return big_p.powi(1 - n) / (n - 1) as f64;
    }
    let (s, c) = (big_p * d).sin_cos();
    -s / (d * big_p.powi(n)) + n as f64 * c / (d * d * big_p.powi(n + 1))
}

/// The integrand components, in order.
const COMPONENTS: usize = 4;
const NORM: usize = 0;
const P2: usize = 1;
const X2: usize = 2;
const X1: usize = 3;

/// One-sided model integral ∫_P^∞ of each component, from the kink jumps.
fn kink_model_tail(jumps: &[(f64, f64)], big_p: f64) -> [f64; COMPONENTS] {
    let mut out = [0.0; COMPONENTS];
    for &(xk, jk) in jumps {
        for &(xl, jl) in jumps {
            let d = xk - xl;
            let c4 = cos_tail(4, big_p, d);
            out[NORM] += jk * jl * c4;
            out[P2] += jk * jl * cos_tail(2, big_p, d);
            out[X2] += xk * jk * xl * jl * c4;
            out[X1] += jk * xl * jl * c4;
        }
    }
    out.map(|v| v / (2.0 * PI))
}

/// Moments computed from φ and χ on [−p_max, p_max] plus the tail model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentumMoments {
    pub p_max: f64,
    /// ⟨x⟩, ⟨x²⟩, ⟨p⟩, ⟨p²⟩; est_error includes the tail bound
    pub set: MomentSet,
    /// the closed-form tail added to ⟨p²⟩ beyond ±p_max
    pub tail_correction: f64,
    /// bound on the error of that tail correction
    pub tail_bound: f64,
    /// ∫_{−p_max}^{p_max} |φ|² dp
    pub truncated_norm: f64,
    /// |1 − truncated_norm|, without any tail added
    pub parseval_defect: f64,
    /// norm expected beyond ±p_max
    pub parseval_tail: f64,
    pub parseval_tail_bound: f64,
    /// tail bound above the tolerance, or quadrature did not converge
    pub flagged: bool,
}

impl MomentumMoments {
    /// |1 − (truncated norm + tail)|.
    pub fn corrected_parseval_defect(&self) -> f64 {
        (1.0 - self.truncated_norm - self.parseval_tail).abs()
    }
}

/// [|φ|², p²|φ|², |χ|², Re(φ̄χ)] at p.
fn components(state: &WaveSpec, p: f64, cfg: &QuadratureConfig) -> Result<([f64; COMPONENTS], f64)> {
    let r = pair(state, p, cfg)?;
    let [phi, chi] = r.value;
    let n = phi.norm_sqr();
    Ok(([n, p * p * n, chi.norm_sqr(), (phi.conj() * chi).re], r.est_error))
}

/// Adaptive integral of the component vector over [a, b] with the given panel edges.
fn integrate_components(
    state: &WaveSpec,
    a: f64,
    b: f64,
    step: f64,
    inner: &QuadratureConfig,
    outer: &QuadratureConfig,
) -> Result<IntegralResult<[f64; COMPONENTS]>> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let count = ((b - a) / step).ceil().min(1e6) as usize;
    let bps: Vec<f64> = (1..count).map(|k| a + k as f64 * step).filter(|&x| x < b).collect();
    let r = integrate_vec(
        |p| match components(state, p, inner) {
            Ok((v, _)) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                [0.0; COMPONENTS]
            }
        },
        Interval::finite(a, b),
        &bps,
        outer,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r)
}

/// Momentum-space moments with an explicit tail estimate.
pub fn momentum_moments(state: &WaveSpec, p_max: f64, cfg: &QuadratureConfig) -> Result<MomentumMoments> {
    check_p_max(p_max)?;
    cfg.validate()?;
    let inner = transform_config(state, p_max, cfg);
    let outer = QuadratureConfig {
        rel_tol: cfg.rel_tol.max(1e-10),
        abs_tol: cfg.abs_tol.max(1e-14),
        max_subdivisions: OUTER_BUDGET,
        ..*cfg
    };
    // Outer panels no wider than the finest oscillation |φ|² can have.
    let step = 2.0 / state.length_scale();
    let half = 0.5 * p_max;
    let low = integrate_components(state, 0.0, half, step, &inner, &outer)?;
    let high = integrate_components(state, half, p_max, step, &inner, &outer)?;

    let (tail, bound) = if state.is_smooth() {
        smooth_tail(state, p_max, &high.value, &inner)?
    } else {
        let jumps: Vec<(f64, f64)> = state
            .kinks()
            .iter()
            .chain(state.wall_jumps().iter())
            .map(|k| (k.location, k.jump_psi_prime))
            .collect();
        let beyond = kink_model_tail(&jumps, p_max);
        let from_half = kink_model_tail(&jumps, half);
        let mut bound = [0.0; COMPONENTS];
        for i in 0..COMPONENTS {
            let model_window = from_half[i] - beyond[i];
            bound[i] = (high.value[i] - model_window).abs();
        }
        (beyond, bound)
    };

    let quad_err = low.est_error + high.est_error;
    let total = |i: usize| 2.0 * (low.value[i] + high.value[i] + tail[i]);
    let err = |i: usize| 2.0 * (quad_err + bound[i]);
    let mean_p2 = total(P2);
    let set = MomentSet {
        mean_x: Moment { value: total(X1), est_error: err(X1) },
        mean_x2: Moment { value: total(X2), est_error: err(X2) },
        mean_p: Moment { value: 0.0, est_error: 0.0 },
        mean_p2: Moment { value: mean_p2, est_error: err(P2) },
        route: Route::Momentum,
    };
    let truncated_norm = 2.0 * (low.value[NORM] + high.value[NORM]);
    let tail_bound = 2.0 * bound[P2];
    Ok(MomentumMoments {
        p_max,
        set,
        tail_correction: 2.0 * tail[P2],
        tail_bound,
        truncated_norm,
        parseval_defect: (1.0 - truncated_norm).abs(),
        parseval_tail: 2.0 * tail[NORM],
        parseval_tail_bound: 2.0 * bound[NORM],
        flagged: tail_bound > TAIL_TOLERANCE * mean_p2.abs().max(1e-300) || !(low.converged && high.converged),
    })
}

/// Exponential extrapolation of each component from p_max/2 and p_max.
fn smooth_tail(
    state: &WaveSpec,
    p_max: f64,
    window: &[f64; COMPONENTS],
    inner: &QuadratureConfig,
) -> Result<([f64; COMPONENTS], [f64; COMPONENTS])> {
    let (at_half, _) = components(state, 0.5 * p_max, inner)?;
    let (at_end, _) = components(state, p_max, inner)?;
    let mut tail = [0.0; COMPONENTS];
    let mut bound = [0.0; COMPONENTS];
    for i in 0..COMPONENTS {
        let (f0, f1) = (at_half[i].abs(), at_end[i].abs());
        if f1 == 0.0 {
            continue;
        }
        let rate = if f0 > f1 { (f0 / f1).ln() / (0.5 * p_max) } else { 0.0 };
        // No visible decay: the best available statement is that the tail
        // is no larger than what the last half window held.
        bound[i] = if rate > 0.0 { f1 / rate } else { window[i].abs() };
        tail[i] = 0.0;
    }
    Ok((tail, bound))
}

/// φ on a uniform grid and the Parseval defect of the state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentumProfile {
    pub p_grid: Vec<f64>,
    pub phi_values: Vec<Complex64>,
    pub p_max: f64,
    pub parseval_defect: f64,
    /// norm beyond ±p_max predicted by the tail model, and its bound
    pub parseval_tail: f64,
    pub parseval_tail_bound: f64,
}

/// Samples φ on `samples` evenly spaced points of [−p_max, p_max].
pub fn momentum_profile(state: &WaveSpec, p_max: f64, samples: usize, cfg: &QuadratureConfig) -> Result<MomentumProfile> {
    check_p_max(p_max)?;
    if samples < 2 {
        return Err(Error::Domain(format!("need at least 2 samples, got {samples}")));
    }
    let inner = transform_config(state, p_max, cfg);
    let step = 2.0 * p_max / (samples - 1) as f64;
    let p_grid: Vec<f64> = (0..samples).map(|k| if k + 1 == samples { p_max } else { -p_max + k as f64 * step }).collect();
    let phi_values = p_grid.par_iter().map(|&p| Ok(pair(state, p, &inner)?.value[0])).collect::<Result<Vec<_>>>()?;
    let m = momentum_moments(state, p_max, cfg)?;
    Ok(MomentumProfile {
        p_grid,
        phi_values,
        p_max,
        parseval_defect: m.parseval_defect,
        parseval_tail: m.parseval_tail,
        parseval_tail_bound: m.parseval_tail_bound,
    })
}

/// U by the momentum route next to U by the position routes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub state: StateKind,
    pub u_position: f64,
    pub u_momentum: f64,
    pub delta_u: f64,
    pub tolerance: f64,
    pub p_max: f64,
    pub tail_bound: f64,
    pub parseval_defect: f64,
    pub flagged: bool,
    pub pass: bool,
}

pub fn equivalence_check(state: &WaveSpec) -> Result<EquivalenceReport> {
    equivalence_check_with(state, default_p_max(state), &QuadratureConfig::default())
}

pub fn equivalence_check_with(state: &WaveSpec, p_max: f64, cfg: &QuadratureConfig) -> Result<EquivalenceReport> {
    let position = position_routes(state, cfg)?[0];
    let momentum = momentum_moments(state, p_max, cfg)?;
    let u_position = position.uncertainty();
    let u_momentum = momentum.set.uncertainty();
    let delta_u = (u_momentum - u_position).abs();
    let tolerance = if state.is_smooth() { SMOOTH_EQUIVALENCE_TOL } else { KINKED_EQUIVALENCE_TOL };
    Ok(EquivalenceReport {
        state: state.kind(),
        u_position,
        u_momentum,
        delta_u,
        tolerance,
        p_max,
        tail_bound: momentum.tail_bound,
        parseval_defect: momentum.parseval_defect,
        flagged: momentum.flagged,
        pass: delta_u <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state_catalog::Family;

    fn st(f: Family) -> WaveSpec {
        WaveSpec::new(f).unwrap()
    }

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn transform_examples() {
        let ho = transform(&st(Family::HarmonicOscillator), 1.0).unwrap();
        assert!((ho.re - (-0.5f64).exp() / PI.powf(0.25)).abs() < 1e-12);
        assert!(ho.im.abs() < 1e-12);

        let srm = transform(&st(Family::Srm { s: 1.0 }), 1.0).unwrap();
        assert!((srm.re - 0.5 * PI.sqrt() / (0.5 * PI).cosh()).abs() < 1e-10);

        let boxed = transform(&st(Family::DeltaInBox { a: 1.0 }), 0.0).unwrap();
        assert!((boxed.re - 0.5 * (3.0 / PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn even_states_have_real_transforms() {
        for f in [Family::DeltaWell { alpha: 1.3 }, Family::DeltaInBox { a: 2.0 }, Family::Srm { s: 2.0 }] {
            let s = st(f);
            for p in [0.3, 2.0, 17.0] {
                assert!(transform(&s, p).unwrap().im.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn closed_form_residuals() {
        let r = closed_phi_residual(&st(Family::Srm { s: 2.0 }), &grid(-10.0, 10.0, 41)).unwrap();
        assert!(r.max_modulus < 1e-8, "{r:?}");
        let r = closed_phi_residual(&st(Family::DeltaWell { alpha: 1.0 }), &grid(-20.0, 20.0, 81)).unwrap();
        assert!(r.max_modulus < 1e-8, "{r:?}");
        let r = closed_phi_residual(&st(Family::Morse { lambda: 1.0 }), &grid(-5.0, 5.0, 41)).unwrap();
        assert!(r.max_modulus_sq < 1e-7, "{r:?}");
        let r = closed_phi_residual(&st(Family::Idw { a: 1.5 }), &grid(-30.0, 30.0, 61)).unwrap();
        assert!(r.max_modulus < 1e-8, "{r:?}");
    }

    #[test]
    fn kink_tail_law() {
        // |φ|(1 + p²) is constant for the exponential state
        let s = st(Family::DeltaWell { alpha: 1.0 });
        let c = (2.0 / PI).sqrt();
        for p in [10.0, 25.0, 50.0, 100.0] {
            let v = transform(&s, p).unwrap().norm() * (1.0 + p * p);
            assert!((v - c).abs() < 1e-6, "p={p}: {v}");
        }
    }

    #[test]
    fn global_phase_drops_out() {
        let s = st(Family::DeltaInBox { a: 1.0 });
        let phase = Complex64::from_polar(1.0, 0.7);
        for p in [0.0, 1.0, 9.0] {
            let phi = transform(&s, p).unwrap();
            assert!(((phase * phi).norm() - phi.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn momentum_moment_examples() {
        let cfg = QuadratureConfig::default();
        let m = momentum_moments(&st(Family::DeltaWell { alpha: 1.0 }), 500.0, &cfg).unwrap();
        assert!((m.set.mean_p2.value - 1.0).abs() < 2e-3, "{m:?}");
        let m = momentum_moments(&st(Family::HarmonicOscillator), 10.0, &cfg).unwrap();
        assert!((m.set.mean_p2.value - 0.5).abs() < 1e-10, "{m:?}");
        assert!((m.set.mean_x2.value - 0.5).abs() < 1e-10, "{m:?}");
        let m = momentum_moments(&st(Family::DeltaInBox { a: 1.0 }), 500.0, &cfg).unwrap();
        assert!((m.set.mean_p2.value - 3.0).abs() < 5e-3, "{m:?}");
        assert!(m.set.mean_x.value.abs() < 1e-9);
        assert!((m.set.mean_x2.value - 0.1).abs() < 1e-6, "{m:?}");
    }

    #[test]
    fn tail_model_matches_kink_decay() {
        // truncated norm misses exactly the modelled tail
        let m = momentum_moments(&st(Family::DeltaWell { alpha: 1.0 }), 50.0, &QuadratureConfig::default()).unwrap();
        let exact_missing = 1.0 - (2.0 / PI) * (50.0 / (1.0 + 2500.0) + 50f64.atan());
        assert!((m.parseval_defect - exact_missing).abs() < 1e-9);
        assert!((m.parseval_tail - exact_missing).abs() < 1e-8);
        assert!(m.parseval_tail_bound < 1e-6);
    }

    #[test]
    fn offset_state_mean_position() {
        let m = momentum_moments(&st(Family::Idw { a: 2.0 }), 50.0, &QuadratureConfig::default()).unwrap();
        assert!((m.set.mean_x.value - 1.0).abs() < 1e-7, "{m:?}");
    }

    #[test]
    fn equivalence_smooth_and_kinked() {
        for f in [Family::HarmonicOscillator, Family::Srm { s: 1.0 }] {
            let r = equivalence_check(&st(f)).unwrap();
            assert!(r.delta_u < 1e-8 && r.pass, "{r:?}");
        }
        let r = equivalence_check(&st(Family::DeltaWell { alpha: 2.0 })).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn profile_grid() {
        let p = momentum_profile(&st(Family::HarmonicOscillator), 10.0, 5, &QuadratureConfig::default()).unwrap();
        assert_eq!(p.p_grid, vec![-10.0, -5.0, 0.0, 5.0, 10.0]);
        assert!(p.parseval_defect < 1e-12);
        assert!(momentum_profile(&st(Family::HarmonicOscillator), 10.0, 1, &QuadratureConfig::default()).is_err());
        assert!(momentum_profile(&st(Family::HarmonicOscillator), -1.0, 5, &QuadratureConfig::default()).is_err());
    }
}
