//! Deep-well behaviour of the closed-form products U_SRM(s) and U_Morse(λ).
//!
//! Both tend to ½ as the well deepens. Expanding Ψ′(z) = 1/z + 1/(2z²) +
//! 1/(6z³) + … gives
//!
//! ```text
//! U_SRM − ½   ≈ 1/(24 s²)
//! U_Morse − ½ ≈ 1/(16 λ)
//! ```
//!
//! so the fitted log-log slopes are −2 and −1. The excess over ½ is taken
//! from the cancellation-free forms in `special_fns`, which keeps the fit
//! meaningful at parameters where U − ½ is near machine epsilon.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special_fns::{morse_uncertainty, morse_uncertainty_excess, srm_uncertainty, srm_uncertainty_excess};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitFamily {
    Srm,
    Morse,
}

impl LimitFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            LimitFamily::Srm => "srm",
            LimitFamily::Morse => "morse",
        }
    }

    pub fn parameter_name(self) -> &'static str {
        match self {
            LimitFamily::Srm => "s",
            LimitFamily::Morse => "lambda",
        }
    }

    fn valid(self, x: f64) -> bool {
        x.is_finite()
            && match self {
                LimitFamily::Srm => x > 0.0,
                LimitFamily::Morse => x > 0.5,
            }
    }

    /// (U, U − ½)
    pub fn evaluate(self, x: f64) -> Result<(f64, f64)> {
        match self {
            LimitFamily::Srm => Ok((srm_uncertainty(x)?, srm_uncertainty_excess(x)?)),
            LimitFamily::Morse => Ok((morse_uncertainty(x)?, morse_uncertainty_excess(x)?)),
        }
    }
}

impl fmt::Display for LimitFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LimitFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "srm" => Ok(LimitFamily::Srm),
            "morse" => Ok(LimitFamily::Morse),
            other => Err(Error::Config(format!("unknown limit family '{other}' (expected srm or morse)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitScan {
    pub family: LimitFamily,
    pub grid: Vec<f64>,
    pub u_values: Vec<f64>,
    /// U − ½ at each grid point
    pub excess: Vec<f64>,
    /// slope of log(U − ½) against log(parameter) over the top decade
    pub fitted_exponent: f64,
    /// exp(intercept) of that fit
    pub fitted_prefactor: f64,
    /// number of grid points the fit used
    pub fit_points: usize,
}

/// Evaluates U on the grid and fits the power-law decay of U − ½.
pub fn limit_scan(family: LimitFamily, grid: &[f64]) -> Result<LimitScan> {
    if grid.is_empty() {
        return Err(Error::Domain("limit scan needs at least one grid point".into()));
    }
    for (i, &x) in grid.iter().enumerate() {
        if !family.valid(x) {
            return Err(Error::Domain(format!("grid point {x} is outside the {family} range")));
        }
        if i > 0 && x <= grid[i - 1] {
            return Err(Error::Domain(format!("grid must be strictly increasing (index {i})")));
        }
    }

    let rows: Vec<(f64, f64)> = grid.par_iter().map(|&x| family.evaluate(x)).collect::<Result<_>>()?;
    let (u_values, excess): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();

    let top = grid[grid.len() - 1];
    let (xs, ys): (Vec<f64>, Vec<f64>) = grid
        .iter()
        .zip(&excess)
        .filter(|&(&x, &e)| x >= top / 10.0 && e > 0.0)
        .map(|(&x, &e)| (x.ln(), e.ln()))
        .unzip();
    let (slope, intercept) = least_squares(&xs, &ys);

    Ok(LimitScan {
        family,
        grid: grid.to_vec(),
        u_values,
        excess,
        fitted_exponent: slope,
        fitted_prefactor: intercept.exp(),
        fit_points: xs.len(),
    })
}

/// Ordinary least-squares line; NaN when fewer than two distinct abscissae.
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return (f64::NAN, f64::NAN);
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return (f64::NAN, f64::NAN);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// `points` values spaced geometrically from `min` to `max` inclusive.
pub fn geometric_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && min > 0.0 && max > min) {
        return Err(Error::Domain(format!("need 0 < min < max, got [{min}, {max}]")));
    }
    if points < 2 {
        return Err(Error::Domain(format!("need at least 2 points, got {points}")));
    }
    let ratio = (max / min).ln() / (points - 1) as f64;
    Ok((0..points)
        .map(|k| match k {
            0 => min,
            k if k + 1 == points => max,
            k => min * (ratio * k as f64).exp(),
        })
        .collect())
}

/// {2, 4, …, 2^k}
pub fn powers_of_two(k: u32) -> Vec<f64> {
    (1..=k).map(|j| 2f64.powi(j as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fns::{trigamma, trigamma_excess};

    #[test]
    fn deep_well_limits() {
        let grid = powers_of_two(20);
        let srm = limit_scan(LimitFamily::Srm, &grid).unwrap();
        let morse = limit_scan(LimitFamily::Morse, &grid).unwrap();
        assert!(*srm.excess.last().unwrap() <= 1e-6);
        assert!(*morse.excess.last().unwrap() <= 1e-6);
        assert_eq!(srm.fit_points, 4);
        // leading terms of the hand expansion
        assert!((srm.fitted_exponent + 2.0).abs() < 1e-3, "{}", srm.fitted_exponent);
        assert!((srm.fitted_prefactor - 1.0 / 24.0).abs() < 1e-4);
        assert!((morse.fitted_exponent + 1.0).abs() < 1e-3, "{}", morse.fitted_exponent);
        assert!((morse.fitted_prefactor - 1.0 / 16.0).abs() < 1e-4);
    }

    #[test]
    fn values_bounded_and_monotone() {
        for fam in [LimitFamily::Srm, LimitFamily::Morse] {
            let scan = limit_scan(fam, &geometric_grid(2.0, 1e6, 60).unwrap()).unwrap();
            for w in scan.u_values.windows(2) {
                assert!(w[1] <= w[0]);
            }
            assert!(scan.u_values.iter().all(|&u| u >= 0.5));
            assert!(scan.excess.iter().all(|&e| e > 0.0));
        }
    }

    #[test]
    fn asymptotic_residual_bound() {
        for k in 0..200 {
            let z = 10.0 * 1.07f64.powi(k);
            let direct = trigamma(z).unwrap().value - 1.0 / z - 0.5 / (z * z);
            assert!(direct.abs() <= 2.0 / (z * z * z));
            assert!(trigamma_excess(z).unwrap().abs() <= 2.0 / (z * z * z));
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(limit_scan(LimitFamily::Srm, &[]).is_err());
        assert!(limit_scan(LimitFamily::Srm, &[1.0, 1.0]).is_err());
        assert!(limit_scan(LimitFamily::Srm, &[2.0, 1.0]).is_err());
        assert!(limit_scan(LimitFamily::Srm, &[0.0, 1.0]).is_err());
        assert!(limit_scan(LimitFamily::Morse, &[0.5, 1.0]).is_err());
        assert!(limit_scan(LimitFamily::Morse, &[0.75, f64::INFINITY]).is_err());
        assert!(geometric_grid(0.0, 1.0, 5).is_err());
        assert!(geometric_grid(1.0, 2.0, 1).is_err());
    }

    #[test]
    fn grid_helpers() {
        let g = geometric_grid(1.0, 1000.0, 4).unwrap();
        assert_eq!(g[0], 1.0);
        assert_eq!(g[3], 1000.0);
        assert!((g[1] - 10.0).abs() < 1e-12);
        assert_eq!(powers_of_two(3), vec![2.0, 4.0, 8.0]);
        assert_eq!("morse".parse::<LimitFamily>().unwrap(), LimitFamily::Morse);
        assert!("ho".parse::<LimitFamily>().is_err());
    }
}
