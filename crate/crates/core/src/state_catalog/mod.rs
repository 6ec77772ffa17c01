//! Catalog of ground states with known uncertainty products, plus
//! user-tabulated states.
//!
//! All states are real and written in natural units (ℏ = m = 1). Kinked
//! states carry [`KinkPoint`] metadata: the location and the jump
//! ψ′(x⁺) − ψ′(x⁻), which is exactly the strength of the δ term that appears
//! in ψ″ there.

mod tabulated;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

pub use tabulated::{TabulatedState, MIN_SAMPLES};

use crate::error::{Error, Result};
use crate::quadrature::Interval;
use crate::special_fns::gamma_half_line_abs_sq;

/// Distance inside which a derivative request counts as "at the kink".
pub const KINK_EXCLUSION: f64 = 1e-14;

/// Sign function with sgn(0) = 0.
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Heaviside step with θ(0) = 1, so that sgn(x) = 2θ(x) − 1 away from 0.
pub fn heaviside(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KinkPoint {
    pub location: f64,
    /// ψ′(location⁺) − ψ′(location⁻)
    pub jump_psi_prime: f64,
}

impl KinkPoint {
    pub fn new(location: f64, jump_psi_prime: f64) -> Result<Self> {
        if !location.is_finite() || !jump_psi_prime.is_finite() {
            return Err(Error::Domain("kink location and jump must be finite".into()));
        }
        if jump_psi_prime == 0.0 {
            return Err(Error::Domain(format!("zero derivative jump at {location} is not a kink")));
        }
        Ok(Self { location, jump_psi_prime })
    }
}

/// Selector names used on the command line and in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    Idw,
    Ho,
    Srm,
    Morse,
    DeltaWell,
    DeltaInBox,
    Lorentzian,
    Tabulated,
}

impl StateKind {
    pub const ALL: [StateKind; 8] = [
        StateKind::Idw,
        StateKind::Ho,
        StateKind::Srm,
        StateKind::Morse,
        StateKind::DeltaWell,
        StateKind::DeltaInBox,
        StateKind::Lorentzian,
        StateKind::Tabulated,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StateKind::Idw => "idw",
            StateKind::Ho => "ho",
            StateKind::Srm => "srm",
            StateKind::Morse => "morse",
            StateKind::DeltaWell => "delta-well",
            StateKind::DeltaInBox => "delta-in-box",
            StateKind::Lorentzian => "lorentzian",
            StateKind::Tabulated => "tabulated",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            StateKind::Idw => "infinitely deep well of width a, ground state on [0, a]",
            StateKind::Ho => "harmonic oscillator V = x^2/4, Gaussian ground state",
            StateKind::Srm => "symmetric Rosen-Morse well s(s+1) tanh^2 x, s in {1, 2}",
            StateKind::Morse => "Morse oscillator lambda^2 (1 - e^-x)^2, lambda = 1",
            StateKind::DeltaWell => "attractive delta well, psi = sqrt(alpha) e^{-alpha|x|}",
            StateKind::DeltaInBox => "delta well between rigid walls at +-a, zero-curvature state",
            StateKind::Lorentzian => "Lorentzian A/(x^2 + alpha^2), momentum dual of the delta well",
            StateKind::Tabulated => "user-supplied samples, spline reconstruction",
        }
    }

    /// Parameter names the family accepts, in order.
    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            StateKind::Idw | StateKind::DeltaInBox => &["a"],
            StateKind::DeltaWell | StateKind::Lorentzian => &["alpha"],
            StateKind::Srm => &["s"],
            StateKind::Morse => &["lambda"],
            StateKind::Ho | StateKind::Tabulated => &[],
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StateKind::ALL
            .iter()
            .copied()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnsupportedCatalog(format!("unknown state '{s}'")))
    }
}

/// A state family together with its parameters.
#[derive(Debug, Clone)]
pub enum Family {
    Idw { a: f64 },
    HarmonicOscillator,
    Srm { s: f64 },
    Morse { lambda: f64 },
    DeltaWell { alpha: f64 },
    DeltaInBox { a: f64 },
    Lorentzian { alpha: f64 },
    Tabulated(Arc<TabulatedState>),
}

impl Family {
    pub fn kind(&self) -> StateKind {
        match self {
            Family::Idw { .. } => StateKind::Idw,
            Family::HarmonicOscillator => StateKind::Ho,
            Family::Srm { .. } => StateKind::Srm,
            Family::Morse { .. } => StateKind::Morse,
            Family::DeltaWell { .. } => StateKind::DeltaWell,
            Family::DeltaInBox { .. } => StateKind::DeltaInBox,
            Family::Lorentzian { .. } => StateKind::Lorentzian,
            Family::Tabulated(_) => StateKind::Tabulated,
        }
    }
}

/// Which one-sided limit to take at a kink or wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// An immutable, normalized, real ground state.
#[derive(Debug, Clone)]
pub struct WaveSpec {
    family: Family,
    domain: Interval,
    kinks: Vec<KinkPoint>,
    closed_u: Option<f64>,
    length_scale: f64,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
    }
}

impl WaveSpec {
    /// Builds a catalog state. Tabulated states come from [`WaveSpec::ingest_tabulated`].
    pub fn new(family: Family) -> Result<Self> {
        let line = Interval::real_line();
        let spec = match family {
            Family::Idw { a } => {
                positive("a", a)?;
                Self {
                    domain: Interval::finite(0.0, a),
                    kinks: vec![],
                    closed_u: Some(0.5 * ((PI * PI - 6.0) / 3.0).sqrt()),
                    length_scale: a,
                    family,
                }
            }
            Family::HarmonicOscillator => Self {
                domain: line,
                kinks: vec![],
                closed_u: Some(0.5),
                length_scale: 1.0,
                family,
            },
            Family::Srm { s } => {
                let closed = if s == 1.0 {
                    PI / 6.0
                } else if s == 2.0 {
                    ((PI * PI - 6.0) / 15.0).sqrt()
                } else {
                    return Err(Error::UnsupportedCatalog(format!(
                        "SRM ground state is tabulated only for s = 1, 2 (got {s}); use srm_uncertainty for general s"
                    )));
                };
                Self { domain: line, kinks: vec![], closed_u: Some(closed), length_scale: 1.0, family }
            }
            Family::Morse { lambda } => {
                if lambda != 1.0 {
                    return Err(Error::UnsupportedCatalog(format!(
                        "Morse ground state is tabulated only for lambda = 1 (got {lambda}); use morse_uncertainty for general lambda"
                    )));
                }
                Self {
                    domain: line,
                    kinks: vec![],
                    closed_u: Some(PI / (2.0 * 6f64.sqrt())),
                    length_scale: 1.0,
                    family,
                }
            }
            Family::DeltaWell { alpha } => {
                positive("alpha", alpha)?;
                Self {
                    domain: line,
                    kinks: vec![KinkPoint::new(0.0, -2.0 * alpha.powf(1.5))?],
                    closed_u: Some(std::f64::consts::FRAC_1_SQRT_2),
                    length_scale: 1.0 / alpha,
                    family,
                }
            }
            Family::DeltaInBox { a } => {
                positive("a", a)?;
                let c = (1.5 / a).sqrt();
                Self {
                    domain: Interval::finite(-a, a),
                    kinks: vec![KinkPoint::new(0.0, -2.0 * c / a)?],
                    closed_u: Some(0.3f64.sqrt()),
                    length_scale: a,
                    family,
                }
            }
            Family::Lorentzian { alpha } => {
                positive("alpha", alpha)?;
                Self {
                    domain: line,
                    kinks: vec![],
                    closed_u: Some(std::f64::consts::FRAC_1_SQRT_2),
                    length_scale: alpha,
                    family,
                }
            }
            Family::Tabulated(_) => {
                return Err(Error::UnsupportedCatalog(
                    "tabulated states are built with WaveSpec::ingest_tabulated".into(),
                ))
            }
        };
        Ok(spec)
    }

    /// Spline reconstruction of sampled ψ values, renormalized to ∫ψ² = 1.
    ///
    /// `kink_locations` must coincide with sample abscissae; the spline is
    /// split there so the derivative jump survives interpolation.
    pub fn ingest_tabulated(samples: &[(f64, f64)], kink_locations: &[f64]) -> Result<Self> {
        let (state, jumps) = TabulatedState::build(samples, kink_locations)?;
        let domain = Interval::finite(state.lo(), state.hi());
        let kinks = jumps
            .into_iter()
            .map(|(loc, jump)| KinkPoint::new(loc, jump))
            .collect::<Result<Vec<_>>>()?;
        let mut spec = Self {
            family: Family::Tabulated(Arc::new(state)),
            domain,
            kinks,
            closed_u: None,
            length_scale: 1.0,
        };
        spec.length_scale = spec.spread_estimate();
        Ok(spec)
    }

    fn spread_estimate(&self) -> f64 {
        let Family::Tabulated(t) = &self.family else { return 1.0 };
        let knots = t.interior_knots();
        let cfg = crate::quadrature::QuadratureConfig::default().with_budget(4 * knots.len() + 64);
        let m1 = crate::quadrature::integrate(|x| x * self.evaluate(x).powi(2), self.domain, &knots, &cfg);
        let m2 = crate::quadrature::integrate(|x| x * x * self.evaluate(x).powi(2), self.domain, &knots, &cfg);
        match (m1, m2) {
            (Ok(m1), Ok(m2)) if m2.value - m1.value * m1.value > 0.0 => (m2.value - m1.value * m1.value).sqrt(),
            _ => (self.domain.hi - self.domain.lo) / 4.0,
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn kind(&self) -> StateKind {
        self.family.kind()
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn kinks(&self) -> &[KinkPoint] {
        &self.kinks
    }

    /// Closed-form U in units of ℏ, when one is known.
    pub fn closed_u(&self) -> Option<f64> {
        self.closed_u
    }

    /// Natural length of the state (a, 1/α, α, or the spread of tabulated data).
    pub fn length_scale(&self) -> f64 {
        self.length_scale
    }

    /// Named parameters, in a fixed order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match &self.family {
            Family::Idw { a } | Family::DeltaInBox { a } => vec![("a", *a)],
            Family::DeltaWell { alpha } | Family::Lorentzian { alpha } => vec![("alpha", *alpha)],
            Family::Srm { s } => vec![("s", *s)],
            Family::Morse { lambda } => vec![("lambda", *lambda)],
            Family::HarmonicOscillator => vec![],
            Family::Tabulated(t) => vec![("samples", t.sample_count as f64), ("normalization", t.normalization)],
        }
    }

    /// Breakpoints every position-space integral over this state must honor.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.family {
            Family::Tabulated(t) => t.interior_knots(),
            _ => self.kinks.iter().map(|k| k.location).collect(),
        }
    }

    /// True when neither interior kinks nor wall slopes break smoothness,
    /// i.e. when φ(p) decays faster than any power.
    pub fn is_smooth(&self) -> bool {
        self.kinks.is_empty() && self.wall_jumps().is_empty()
    }

    /// ψ(x); zero outside a finite domain.
    pub fn evaluate(&self, x: f64) -> f64 {
        match &self.family {
            Family::Idw { a } => {
                if (0.0..=*a).contains(&x) {
                    (2.0 / a).sqrt() * (PI * x / a).sin()
                } else {
                    0.0
                }
            }
            Family::HarmonicOscillator => (-0.5 * x * x).exp() / PI.powf(0.25),
            Family::Srm { s } => {
                let sech = 1.0 / x.cosh();
                if *s == 1.0 {
                    std::f64::consts::FRAC_1_SQRT_2 * sech
                } else {
                    0.5 * 3f64.sqrt() * sech * sech
                }
            }
            Family::Morse { .. } => std::f64::consts::SQRT_2 * (-x.exp() + 0.5 * x).exp(),
            Family::DeltaWell { alpha } => alpha.sqrt() * (-alpha * x.abs()).exp(),
            Family::DeltaInBox { a } => {
                if x.abs() <= *a {
                    (1.5 / a).sqrt() * (1.0 - x.abs() / a)
                } else {
                    0.0
                }
            }
            Family::Lorentzian { alpha } => {
                let amp = (2.0 * alpha.powi(3) / PI).sqrt();
                amp / (x * x + alpha * alpha)
            }
            Family::Tabulated(t) => t.value(x),
        }
    }

    fn at_kink(&self, x: f64) -> Option<f64> {
        self.kinks
            .iter()
            .map(|k| k.location)
            .chain([self.domain.lo, self.domain.hi].into_iter().filter(|e| e.is_finite()))
            .find(|&loc| (x - loc).abs() < KINK_EXCLUSION)
    }

    /// Classical ψ′(x); errors at kinks and walls, where only one-sided
    /// limits exist.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        if let Some(location) = self.at_kink(x) {
            return Err(Error::KinkEvaluation { location });
        }
        Ok(self.derivatives_on(x, Side::Right).0)
    }

    /// Classical ψ″(x) away from kinks (the δ part is carried by the kink metadata).
    pub fn second_derivative(&self, x: f64) -> Result<f64> {
        if let Some(location) = self.at_kink(x) {
            return Err(Error::KinkEvaluation { location });
        }
        Ok(self.derivatives_on(x, Side::Right).1)
    }

    /// One-sided limit of ψ′ at x (meaningful at kinks and walls).
    pub fn one_sided_derivative(&self, x: f64, side: Side) -> f64 {
        self.derivatives_on(x, side).0
    }

    /// ψ′ and ψ″ using the branch on `side` wherever x sits on a kink or wall.
    pub(crate) fn derivatives_on(&self, x: f64, side: Side) -> (f64, f64) {
        let s = if x == 0.0 {
            match side {
                Side::Left => -1.0,
                Side::Right => 1.0,
            }
        } else {
            sgn(x)
        };
        let inside = |lo: f64, hi: f64| match side {
            Side::Right => x >= lo && x < hi,
            Side::Left => x > lo && x <= hi,
        };
        match &self.family {
            Family::Idw { a } => {
                if !inside(0.0, *a) {
                    return (0.0, 0.0);
                }
                let k = PI / a;
                let c = (2.0 / a).sqrt();
                (c * k * (k * x).cos(), -k * k * c * (k * x).sin())
            }
            Family::HarmonicOscillator => {
                let psi = self.evaluate(x);
                (-x * psi, (x * x - 1.0) * psi)
            }
            Family::Srm { s: order } => {
                let psi = self.evaluate(x);
                let t = x.tanh();
                let sech2 = 1.0 - t * t;
                if *order == 1.0 {
                    (-t * psi, (1.0 - 2.0 * sech2) * psi)
                } else {
                    (-2.0 * t * psi, (4.0 - 6.0 * sech2) * psi)
                }
            }
            Family::Morse { .. } => {
                let psi = self.evaluate(x);
                if psi == 0.0 {
                    return (0.0, 0.0);
                }
                let e = x.exp();
                let k = 0.5 - e;
                (k * psi, (k * k - e) * psi)
            }
            Family::DeltaWell { alpha } => {
                let psi = self.evaluate(x);
                (-alpha * s * psi, alpha * alpha * psi)
            }
            Family::DeltaInBox { a } => {
                if !inside(-a, *a) {
                    return (0.0, 0.0);
                }
                (-(1.5 / a).sqrt() * s / a, 0.0)
            }
            Family::Lorentzian { alpha } => {
                let amp = (2.0 * alpha.powi(3) / PI).sqrt();
                let q = x * x + alpha * alpha;
                (-2.0 * amp * x / (q * q), amp * (6.0 * x * x - 2.0 * alpha * alpha) / (q * q * q))
            }
            Family::Tabulated(t) => {
                if !inside(t.lo(), t.hi()) {
                    return (0.0, 0.0);
                }
                t.derivatives(x, side == Side::Right)
            }
        }
    }

    /// Slope discontinuities at finite domain ends, where ψ′ drops to zero
    /// outside a rigid wall. Entries with zero slope are omitted.
    pub fn wall_jumps(&self) -> Vec<KinkPoint> {
        let mut out = Vec::new();
        if self.domain.lo.is_finite() {
            let j = self.one_sided_derivative(self.domain.lo, Side::Right);
            if j != 0.0 {
                out.push(KinkPoint { location: self.domain.lo, jump_psi_prime: j });
            }
        }
        if self.domain.hi.is_finite() {
            let j = -self.one_sided_derivative(self.domain.hi, Side::Left);
            if j != 0.0 {
                out.push(KinkPoint { location: self.domain.hi, jump_psi_prime: j });
            }
        }
        out
    }

    /// φ₀(p) in closed form where its phase is known.
    ///
    /// Conventions follow φ(p) = (2π)^{-1/2} ∫ ψ(x) e^{−ipx} dx. For the
    /// infinite well this gives √(aπ)(1 + e^{−ipa})/(π² − a²p²); the
    /// commonly quoted 2√(aπ) prefactor with e^{+ipa} does not satisfy
    /// ∫|φ|² = 1. Likewise the triangle state transforms to
    /// √(3a/4π)·sinc²(ap/2), half the often-quoted √(3a/π) amplitude.
    /// The Morse entry Γ(½ − ip)/√π is returned through
    /// [`WaveSpec::closed_phi_modulus`] only.
    pub fn closed_phi(&self, p: f64) -> Option<Complex64> {
        let v = match &self.family {
            Family::Idw { a } => {
                let u = a * p;
                let amp = 2.0 * (PI * a).sqrt() * cos_half_over_pi2_minus_sq(u);
                Complex64::from_polar(amp, -0.5 * u)
            }
            Family::HarmonicOscillator => Complex64::new((-0.5 * p * p).exp() / PI.powf(0.25), 0.0),
            Family::Srm { s } => {
                if *s == 1.0 {
                    Complex64::new(0.5 * PI.sqrt() / (0.5 * PI * p).cosh(), 0.0)
                } else {
                    let ratio = if p == 0.0 { 2.0 / PI } else { p / (0.5 * PI * p).sinh() };
                    Complex64::new((3.0 * PI / 8.0).sqrt() * ratio, 0.0)
                }
            }
            Family::Morse { .. } => return None,
            Family::DeltaWell { alpha } => {
                Complex64::new((2.0 / PI).sqrt() * alpha.powf(1.5) / (alpha * alpha + p * p), 0.0)
            }
            Family::DeltaInBox { a } => {
                let half = 0.5 * a * p;
                let sinc = if half == 0.0 { 1.0 } else { half.sin() / half };
                Complex64::new((0.75 * a / PI).sqrt() * sinc * sinc, 0.0)
            }
            Family::Lorentzian { alpha } => Complex64::new(alpha.sqrt() * (-alpha * p.abs()).exp(), 0.0),
            Family::Tabulated(_) => return None,
        };
        Some(v)
    }

    /// |φ₀(p)| in closed form, including the Morse row via |Γ(½ + ip)|² = π/cosh(πp).
    pub fn closed_phi_modulus(&self, p: f64) -> Option<f64> {
        match &self.family {
            Family::Morse { .. } => Some((gamma_half_line_abs_sq(p) / PI).sqrt()),
            _ => self.closed_phi(p).map(|c| c.norm()),
        }
    }
}

/// cos(u/2)/(π² − u²), written as sin(d/2)/(d(π + |u|)) with d = π − |u|
/// so the removable singularity at |u| = π costs nothing.
fn cos_half_over_pi2_minus_sq(u: f64) -> f64 {
    let au = u.abs();
    let d = PI - au;
    let half = 0.5 * d;
    let sinc = if half == 0.0 { 1.0 } else { half.sin() / half };
    0.5 * sinc / (PI + au)
}
