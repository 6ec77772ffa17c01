//! Position-space moments and the uncertainty product.
//!
//! ⟨p²⟩ is computed two ways. The first-derivative route integrates (ψ′)²
//! piecewise; the kink itself has measure zero. The δ route integrates
//! −ψψ″ piecewise and adds −Σ ψ(x_k)·J_k for every kink, where J_k is the
//! stored jump in ψ′: the δ term J_k·δ(x − x_k) inside ψ″ is sifted
//! analytically and never sampled. Finite walls enter the same sum through
//! their boundary terms, which vanish whenever ψ does at the wall.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, IntegralResult, QuadratureConfig};
use crate::state_catalog::WaveSpec;

/// Slack on U ≥ ½ before a state is reported as violating the bound.
pub const HEISENBERG_TOLERANCE: f64 = 1e-10;

/// |∫ψψ′| above this is treated as a defective state.
pub const MEAN_P_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    FirstDerivative,
    SecondDerivativeDelta,
    Momentum,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::FirstDerivative => "first_derivative",
            Route::SecondDerivativeDelta => "second_derivative_delta",
            Route::Momentum => "momentum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moment {
    pub value: f64,
    pub est_error: f64,
}

impl Moment {
    fn from(r: IntegralResult<f64>) -> Self {
        Self { value: r.value, est_error: r.est_error }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSet {
    pub mean_x: Moment,
    pub mean_x2: Moment,
    pub mean_p: Moment,
    pub mean_p2: Moment,
    pub route: Route,
}

impl MomentSet {
    pub fn dx(&self) -> f64 {
        variance(self.mean_x2.value, self.mean_x.value).sqrt()
    }

    pub fn dp(&self) -> f64 {
        variance(self.mean_p2.value, self.mean_p.value).sqrt()
    }

    pub fn uncertainty(&self) -> f64 {
        self.dx() * self.dp()
    }

    /// First-order error in U propagated from the moment error estimates.
    pub fn uncertainty_error(&self) -> f64 {
        let vx = variance(self.mean_x2.value, self.mean_x.value);
        let vp = variance(self.mean_p2.value, self.mean_p.value);
        let ex = self.mean_x2.est_error + 2.0 * self.mean_x.value.abs() * self.mean_x.est_error;
        let ep = self.mean_p2.est_error + 2.0 * self.mean_p.value.abs() * self.mean_p.est_error;
        let u = (vx * vp).sqrt();
        if u == 0.0 {
            return f64::INFINITY;
        }
        0.5 * u * (ex / vx + ep / vp)
    }
}

fn variance(second: f64, first: f64) -> f64 {
    (second - first * first).max(0.0)
}

/// The quadrature config sized for a state (tabulated states bring many knots).
pub(crate) fn config_for(state: &WaveSpec, cfg: &QuadratureConfig) -> QuadratureConfig {
    let knots = state.breakpoints().len();
    let budget = cfg.max_subdivisions.max(4 * knots + 64);
    cfg.with_budget(budget)
}

/// (⟨x⟩, ⟨x²⟩)
pub fn position_moments(state: &WaveSpec, cfg: &QuadratureConfig) -> Result<(Moment, Moment)> {
    let cfg = config_for(state, cfg);
    let bps = state.breakpoints();
    let mean_x = integrate(|x| x * state.evaluate(x).powi(2), state.domain(), &bps, &cfg)?;
    let mean_x2 = integrate(|x| x * x * state.evaluate(x).powi(2), state.domain(), &bps, &cfg)?;
    Ok((Moment::from(mean_x), Moment::from(mean_x2)))
}

/// ⟨p⟩ for a real state.
///
/// ⟨p⟩ = −i∫ψψ′ dx would be purely imaginary for real ψ, so the observable
/// is zero exactly when the integral vanishes. A non-vanishing ∫ψψ′ means
/// the input is not a bound state and is reported as an inconsistency.
pub fn momentum_mean(state: &WaveSpec, cfg: &QuadratureConfig) -> Result<Moment> {
    let cfg = config_for(state, cfg);
    let r = integrate(
        |x| state.evaluate(x) * state.derivatives_on(x, crate::state_catalog::Side::Right).0,
        state.domain(),
        &state.breakpoints(),
        &cfg,
    )?;
    let tol = MEAN_P_TOLERANCE.max(100.0 * r.est_error);
    if r.value.abs() > tol {
        return Err(Error::Inconsistent(format!(
            "integral of psi*psi' is {:.3e}; a bound state must have <p> = 0",
            r.value
        )));
    }
    Ok(Moment { value: 0.0, est_error: r.value.abs() + r.est_error })
}

/// ⟨p²⟩ = ∫(ψ′)² dx (Hermiticity: ⟨pψ|pψ⟩ = ⟨ψ|p²ψ⟩).
pub fn momentum_sq_first_derivative(state: &WaveSpec, cfg: &QuadratureConfig) -> Result<Moment> {
    let cfg = config_for(state, cfg);
    let r = integrate(
        |x| state.derivatives_on(x, crate::state_catalog::Side::Right).0.powi(2),
        state.domain(),
        &state.breakpoints(),
        &cfg,
    )?;
    Ok(Moment::from(r))
}

/// ⟨p²⟩ = −∫ψψ″ split into its pieces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaDecomposition {
    /// −∫ψψ″ over kink-free pieces
    pub regular: Moment,
    /// −Σ ψ(x_k)·J_k over interior kinks
    pub delta: f64,
    /// ψψ′ boundary terms at finite walls
    pub boundary: f64,
}

impl DeltaDecomposition {
    pub fn total(&self) -> Moment {
        Moment {
            value: self.regular.value + self.delta + self.boundary,
            est_error: self.regular.est_error,
        }
    }
}

pub fn momentum_sq_delta_decomposition(state: &WaveSpec, cfg: &QuadratureConfig) -> Result<DeltaDecomposition> {
    let cfg = config_for(state, cfg);
    let r = integrate(
        |x| -state.evaluate(x) * state.derivatives_on(x, crate::state_catalog::Side::Right).1,
        state.domain(),
        &state.breakpoints(),
        &cfg,
    )?;

    let delta: f64 = state
        .kinks()
        .iter()
        .map(|k| -state.evaluate(k.location) * k.jump_psi_prime)
        .sum();
    // Treating each wall as a kink whose outside slope is zero gives the
    // usual [ψψ′] boundary term.
    let boundary: f64 = state
        .wall_jumps()
        .iter()
        .map(|w| -state.evaluate(w.location) * w.jump_psi_prime)
        .sum();

    Ok(DeltaDecomposition { regular: Moment::from(r), delta, boundary })
}

/// ⟨p²⟩ through the second derivative with analytic δ sifting.
pub fn momentum_sq_delta_route(state: &WaveSpec, cfg: &QuadratureConfig) -> Result<Moment> {
    Ok(momentum_sq_delta_decomposition(state, cfg)?.total())
}

/// The two position-space moment sets.
pub fn position_routes(state: &WaveSpec, cfg: &QuadratureConfig) -> Result<[MomentSet; 2]> {
    let (mean_x, mean_x2) = position_moments(state, cfg)?;
    let mean_p = momentum_mean(state, cfg)?;
    let first = momentum_sq_first_derivative(state, cfg)?;
    let second = momentum_sq_delta_route(state, cfg)?;
    Ok([
        MomentSet { mean_x, mean_x2, mean_p, mean_p2: first, route: Route::FirstDerivative },
        MomentSet { mean_x, mean_x2, mean_p, mean_p2: second, route: Route::SecondDerivativeDelta },
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RouteU {
    pub route: Route,
    pub u: f64,
    pub est_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UncertaintyReport {
    pub dx: f64,
    pub dp: f64,
    /// dx·dp, in units of ℏ
    pub u: f64,
    pub routes: Vec<RouteU>,
    pub max_route_discrepancy: f64,
    pub heisenberg_ok: bool,
    pub closed_u: Option<f64>,
    pub closed_deviation: Option<f64>,
}

impl UncertaintyReport {
    pub fn route(&self, route: Route) -> Option<&RouteU> {
        self.routes.iter().find(|r| r.route == route)
    }
}

/// U from both position-space routes, and from a momentum-space moment set
/// when one is supplied.
///
/// Δx, Δp are reported from the first-derivative route. Routes that
/// disagree by more than 100× their combined error estimate (with a
/// rounding floor) make the state inconsistent.
pub fn uncertainty(state: &WaveSpec, cfg: &QuadratureConfig, momentum: Option<&MomentSet>) -> Result<UncertaintyReport> {
    let sets = position_routes(state, cfg)?;
    let primary = sets[0];
    let dx = primary.dx();
    let dp = primary.dp();
    let u = dx * dp;

    let mut routes: Vec<RouteU> = sets
        .iter()
        .map(|s| RouteU { route: s.route, u: s.uncertainty(), est_error: s.uncertainty_error() })
        .collect();
    if let Some(m) = momentum {
        routes.push(RouteU { route: Route::Momentum, u: m.uncertainty(), est_error: m.uncertainty_error() });
    }

    let mut max_route_discrepancy: f64 = 0.0;
    for r in &routes[1..] {
        let diff = (r.u - u).abs();
        max_route_discrepancy = max_route_discrepancy.max(diff);
        let allowed = 100.0 * (r.est_error + routes[0].est_error) + 1e-12 * u.abs();
        if diff > allowed {
            return Err(Error::Inconsistent(format!(
                "route {} gives U = {:.12} but {} gives {:.12} (allowed difference {:.2e})",
                r.route.as_str(),
                r.u,
                routes[0].route.as_str(),
                u,
                allowed
            )));
        }
    }

    Ok(UncertaintyReport {
        dx,
        dp,
        u,
        routes,
        max_route_discrepancy,
        heisenberg_ok: u >= 0.5 - HEISENBERG_TOLERANCE,
        closed_u: state.closed_u(),
        closed_deviation: state.closed_u().map(|c| (u - c).abs()),
    })
}
