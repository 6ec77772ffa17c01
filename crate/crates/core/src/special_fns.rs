//! Trigamma and the closed-form uncertainty products built on it.
//!
//! The trigamma function Ψ′(z) = Σ_{n≥0} 1/(z+n)² is evaluated by shifting
//! the argument upward with Ψ′(z) = Ψ′(z+1) + 1/z² until z ≥ 10 and then
//! summing the Bernoulli asymptotic expansion
//!
//! ```text
//! Ψ′(z) ≈ 1/z + 1/(2z²) + Σ_{k=1..6} B_{2k} / z^{2k+1}
//! ```
//!
//! At z = 10 the first omitted term is B₁₄/z¹⁵ ≈ 1.2e-15, well below the
//! relative accuracy the callers need.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Arguments at or above this value go straight to the asymptotic series.
pub const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

/// B₂, B₄, …, B₁₂.
const BERNOULLI_EVEN: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

/// B₁₄, magnitude of the first dropped coefficient.
const BERNOULLI_14: f64 = 7.0 / 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrigammaMethod {
    /// Asymptotic series only (z ≥ 10).
    Series,
    /// Upward recurrence into the asymptotic region, then the series.
    RecurrencePlusAsymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigammaResult {
    pub value: f64,
    pub method: TrigammaMethod,
    pub est_error: f64,
}

fn check_positive(name: &str, z: f64) -> Result<()> {
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::Domain(format!(
            "{name} must be positive and finite, got {z}"
        )));
    }
    Ok(())
}

/// Σ_{k=1..6} B_{2k} / w^{2k+1}, the part of the expansion beyond 1/w + 1/(2w²).
fn bernoulli_tail(w: f64) -> f64 {
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    // Horner in 1/w² from the smallest term up.
    let mut acc = 0.0;
    for &b in BERNOULLI_EVEN.iter().rev() {
        acc = acc * inv2 + b;
    }
    acc * inv2 * inv
}

/// Ψ′(z) for real z > 0.
pub fn trigamma(z: f64) -> Result<TrigammaResult> {
    check_positive("trigamma argument", z)?;

    let mut w = z;
    let mut shifted = 0.0;
    let mut shifts = 0usize;
    while w < ASYMPTOTIC_THRESHOLD {
        shifted += 1.0 / (w * w);
        w += 1.0;
        shifts += 1;
    }

    let series = 1.0 / w + 0.5 / (w * w) + bernoulli_tail(w);
    let value = shifted + series;
    let truncation = BERNOULLI_14 / w.powi(15);
    let rounding = f64::EPSILON * (shifts as f64 + 4.0) * value;

    Ok(TrigammaResult {
        value,
        method: if shifts == 0 {
            TrigammaMethod::Series
        } else {
            TrigammaMethod::RecurrencePlusAsymptotic
        },
        est_error: truncation + rounding,
    })
}

/// Ψ′(z) − 1/z − 1/(2z²), evaluated without cancellation for large z.
///
/// This is what the deep-well limit needs: the uncertainty excess over ½
/// is driven entirely by this remainder.
pub fn trigamma_excess(z: f64) -> Result<f64> {
    check_positive("trigamma argument", z)?;
    if z >= ASYMPTOTIC_THRESHOLD {
        Ok(bernoulli_tail(z))
    } else {
        Ok(trigamma(z)?.value - 1.0 / z - 0.5 / (z * z))
    }
}

/// Ground-state uncertainty product ½√(s²Ψ′(s)/(s+½)) of the symmetric
/// Rosen–Morse well V = s(s+1) tanh²x, in units of ℏ.
///
/// Assembled as ½ + excess: the direct form rounds below ½ once the excess
/// drops under half an ulp (s ≳ 10⁷).
pub fn srm_uncertainty(s: f64) -> Result<f64> {
    Ok(0.5 + srm_uncertainty_excess(s)?)
}

/// `srm_uncertainty(s) − ½`, accurate even when the difference is near 1e-14.
pub fn srm_uncertainty_excess(s: f64) -> Result<f64> {
    check_positive("SRM parameter s", s)?;
    // s²Ψ′(s) = s + ½ + s²·excess(s)
    let r_minus_1 = s * s * trigamma_excess(s)? / (s + 0.5);
    Ok(half_sqrt_excess(r_minus_1))
}

fn check_morse(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda <= 0.5 {
        return Err(Error::Domain(format!(
            "Morse parameter lambda must exceed 1/2, got {lambda}"
        )));
    }
    Ok(())
}

/// Ground-state uncertainty product ½√((2λ−1)Ψ′(2λ−1)) of the Morse
/// oscillator V = λ²(1 − e^{−x})², in units of ℏ.
pub fn morse_uncertainty(lambda: f64) -> Result<f64> {
    Ok(0.5 + morse_uncertainty_excess(lambda)?)
}

/// `morse_uncertainty(λ) − ½` without cancellation.
pub fn morse_uncertainty_excess(lambda: f64) -> Result<f64> {
    check_morse(lambda)?;
    let z = 2.0 * lambda - 1.0;
    // zΨ′(z) = 1 + 1/(2z) + z·excess(z)
    let r_minus_1 = 0.5 / z + z * trigamma_excess(z)?;
    Ok(half_sqrt_excess(r_minus_1))
}

/// ½(√(1+d) − 1) written so that small d keeps full relative precision.
fn half_sqrt_excess(d: f64) -> f64 {
    0.5 * d / ((1.0 + d).sqrt() + 1.0)
}

/// |Γ(½ + ix)|² = π / cosh(πx).
///
/// Only the modulus of the Morse momentum wavefunction enters any moment,
/// so no complex gamma is needed.
pub fn gamma_half_line_abs_sq(x: f64) -> f64 {
    PI / (PI * x).cosh()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: reversed partial sum of 1/(z+n)² plus the
    /// Euler–Maclaurin tail ∫ + ½f + f′/12 past the cut.
    fn trigamma_partial_sum(z: f64, terms: usize) -> f64 {
        let mut acc = 0.0;
        for n in (0..terms).rev() {
            let w = z + n as f64;
            acc += 1.0 / (w * w);
        }
        let w = z + terms as f64;
        acc + 1.0 / w + 0.5 / (w * w) + 1.0 / (6.0 * w * w * w)
    }

    #[test]
    fn special_values() {
        let one = trigamma(1.0).unwrap();
        assert!((one.value - PI * PI / 6.0).abs() < 1e-12);
        assert_eq!(one.method, TrigammaMethod::RecurrencePlusAsymptotic);
        let half = trigamma(0.5).unwrap();
        assert!((half.value - PI * PI / 2.0).abs() < 1e-12);
        let two = trigamma(2.0).unwrap().value;
        assert!((two - (PI * PI / 6.0 - 1.0)).abs() < 1e-12);
        assert!((two - trigamma_partial_sum(2.0, 1_000_000)).abs() < 1e-12);
    }

    #[test]
    fn large_argument_matches_leading_terms() {
        let r = trigamma(1000.0).unwrap();
        assert_eq!(r.method, TrigammaMethod::Series);
        let lead = 1.0 / 1000.0 + 1.0 / (2.0 * 1e6) + 1.0 / (6.0 * 1e9);
        assert!((r.value - lead).abs() < 1e-9);
        assert!(r.est_error < 1e-15);
    }

    #[test]
    fn partial_sum_oracle() {
        for &z in &[0.5, 1.0, 1.5, 2.0, 5.0, 10.0, 37.3] {
            let v = trigamma(z).unwrap().value;
            let o = trigamma_partial_sum(z, 1_000_000);
            assert!(((v - o) / o).abs() < 1e-10, "z={z}: {v} vs {o}");
        }
    }

    #[test]
    fn excess_matches_direct_subtraction_where_safe() {
        for &z in &[0.3, 2.0, 9.99, 10.0, 12.5, 40.0] {
            let direct = trigamma(z).unwrap().value - 1.0 / z - 0.5 / (z * z);
            let e = trigamma_excess(z).unwrap();
            assert!((direct - e).abs() < 1e-14, "z={z}");
        }
        // leading remainder is 1/(6z³)
        let z = 1e5;
        assert!((trigamma_excess(z).unwrap() * 6.0 * z * z * z - 1.0).abs() < 1e-9);
    }

    #[test]
    fn domain_errors() {
        assert!(trigamma(0.0).is_err());
        assert!(trigamma(-1.5).is_err());
        assert!(trigamma(f64::NAN).is_err());
        assert!(trigamma(f64::INFINITY).is_err());
        assert!(srm_uncertainty(0.0).is_err());
        assert!(morse_uncertainty(0.5).is_err());
        assert!(morse_uncertainty(0.25).is_err());
    }

    #[test]
    fn srm_table_rows() {
        assert!((srm_uncertainty(1.0).unwrap() - PI / 6.0).abs() < 1e-14);
        let row4 = ((PI * PI - 6.0) / 15.0).sqrt();
        assert!((srm_uncertainty(2.0).unwrap() - row4).abs() < 1e-14);
        // 1/(24 s²) leading excess
        assert!((srm_uncertainty(1e6).unwrap() - 0.5).abs() < 5e-7);
    }

    #[test]
    fn morse_table_row_and_half_argument() {
        let row5 = PI / (2.0 * 6f64.sqrt());
        assert!((morse_uncertainty(1.0).unwrap() - row5).abs() < 1e-14);
        assert!((morse_uncertainty(0.75).unwrap() - PI / 4.0).abs() < 1e-14);
        assert!((morse_uncertainty(1e6).unwrap() - 0.5).abs() < 5e-7);
    }

    #[test]
    fn excess_forms_agree_with_plain_forms() {
        for &s in &[0.3, 1.0, 2.0, 7.0, 30.0] {
            let tg = trigamma(s).unwrap().value;
            let a = 0.5 * (s * s * tg / (s + 0.5)).sqrt() - 0.5;
            let b = srm_uncertainty_excess(s).unwrap();
            assert!((a - b).abs() < 1e-14, "s={s}");
        }
        for &l in &[0.6, 1.0, 3.0, 40.0] {
            let z = 2.0 * l - 1.0;
            let a = 0.5 * (z * trigamma(z).unwrap().value).sqrt() - 0.5;
            let b = morse_uncertainty_excess(l).unwrap();
            assert!((a - b).abs() < 1e-14, "lambda={l}");
        }
    }

    #[test]
    fn gamma_modulus_identity() {
        assert!((gamma_half_line_abs_sq(0.0) - PI).abs() < 1e-15);
        assert!((gamma_half_line_abs_sq(1.0) - 0.271_014_951_399_418_35).abs() < 1e-15);
    }
}
