//! Position–momentum uncertainty products for one-dimensional bound states.
//!
//! Natural units throughout: ℏ = m = 1, so every Δp and every U is in units
//! of ℏ. The crate computes U = Δx·Δp for catalog and tabulated states by
//! three independent numerical routes:
//!
//! * position space with ⟨p²⟩ = ∫(ψ′)² dx,
//! * position space with ⟨p²⟩ = −∫ψψ″ dx plus analytic δ terms at kinks,
//! * momentum space, after transforming ψ numerically.
//!
//! Closed forms for the Rosen–Morse and Morse families are in
//! [`special_fns`], and [`asymptotics`] scans them toward the deep-well
//! limit U → ½.

pub mod acceptance;
pub mod asymptotics;
pub mod error;
pub mod fourier;
pub mod moments;
pub mod quadrature;
pub mod special_fns;
pub mod state_catalog;

pub use error::{Error, Result};
pub use moments::{uncertainty, MomentSet, Route, UncertaintyReport};
pub use quadrature::{InfiniteMap, IntegralResult, Interval, QuadratureConfig};
pub use state_catalog::{Family, KinkPoint, StateKind, WaveSpec};
