//! The acceptance suite: ten numbered checks, each returning a pass/fail
//! outcome with a one-line detail. Tolerances are fixed here so that the
//! test target and the `check-all` command agree on what "pass" means.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotics::{limit_scan, powers_of_two, LimitFamily};
use crate::error::Result;
use crate::fourier::{closed_phi_residual, default_p_max, equivalence_check, momentum_moments};
use crate::moments::{momentum_sq_delta_decomposition, position_routes, HEISENBERG_TOLERANCE};
use crate::quadrature::QuadratureConfig;
use crate::special_fns::trigamma;
use crate::state_catalog::{Family, WaveSpec};

pub const TABLE1_TOL: f64 = 1e-8;
pub const ROUTE_AGREEMENT_TOL: f64 = 1e-8;
pub const DRAWS_PER_FAMILY: usize = 50;
pub const DRAW_SEED: u64 = 0x5eed_0001;
/// Parameters are drawn log-uniformly from this range.
pub const DRAW_RANGE: (f64, f64) = (0.05, 20.0);
pub const DUALITY_TOL: f64 = 1e-6;
pub const TRIGAMMA_ORACLE_REL_TOL: f64 = 1e-10;
pub const TRIGAMMA_RECURRENCE_TOL: f64 = 1e-12;
pub const TRIGAMMA_SPECIAL_TOL: f64 = 1e-12;
pub const RECURRENCE_POINTS: usize = 1000;
pub const DEEP_WELL_EXCESS_TOL: f64 = 1e-6;
pub const DEEP_WELL_EXPONENT: f64 = -1.0;
pub const DEEP_WELL_EXPONENT_TOL: f64 = 0.05;
/// U − ½ must clear this margin for every state except the oscillator.
pub const NON_MINIMAL_MARGIN: f64 = 1e-3;
pub const BOOKKEEPING_TOL: f64 = 1e-10;
pub const PHI_MODULUS_TOL: f64 = 1e-8;
pub const PHI_MODULUS_SQ_TOL: f64 = 1e-7;
/// Quadrature slack on top of the reported Parseval tail bound.
pub const PARSEVAL_SLACK: f64 = 1e-8;
pub const INGESTION_SAMPLES: usize = 2001;
pub const INGESTION_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    /// wall time; kept out of serialized output so reports are reproducible
    #[serde(skip)]
    pub seconds: f64,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: {} ({:.2} s)",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.seconds
        )
    }
}

/// Tolerances a caller may loosen or tighten; everything else is fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteTolerances {
    /// closed-form comparison in criterion 1
    pub table1: f64,
}

impl Default for SuiteTolerances {
    fn default() -> Self {
        Self { table1: TABLE1_TOL }
    }
}

/// One row of Table 1: row number, state, closed form as text.
pub struct Table1Row {
    pub row: u8,
    pub state: WaveSpec,
    pub closed_form: &'static str,
}

pub fn table1_rows() -> Vec<Table1Row> {
    let rows = [
        (1, Family::Idw { a: 1.0 }, "sqrt((pi^2-6)/3)/2"),
        (2, Family::HarmonicOscillator, "1/2"),
        (3, Family::Srm { s: 1.0 }, "pi/6"),
        (4, Family::Srm { s: 2.0 }, "sqrt((pi^2-6)/15)"),
        (5, Family::Morse { lambda: 1.0 }, "pi/(2 sqrt 6)"),
        (6, Family::DeltaWell { alpha: 1.0 }, "1/sqrt 2"),
        (7, Family::DeltaInBox { a: 1.0 }, "sqrt(3/10)"),
    ];
    rows.into_iter()
        .map(|(row, f, closed_form)| Table1Row {
            row,
            state: WaveSpec::new(f).expect("catalog parameters are valid"),
            closed_form,
        })
        .collect()
}

fn timed(id: u8, name: &'static str, body: impl FnOnce() -> Result<(bool, String)>) -> CriterionOutcome {
    let start = Instant::now();
    let (pass, detail) = match body() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionOutcome { id, name, pass, detail, seconds: start.elapsed().as_secs_f64() }
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

pub fn criterion_1(tol: f64) -> CriterionOutcome {
    timed(1, "Table 1 reproduction", || {
        let mut worst: f64 = 0.0;
        let mut failed = Vec::new();
        for row in table1_rows() {
            let closed = row.state.closed_u().unwrap_or(f64::NAN);
            for set in position_routes(&row.state, &cfg())? {
                let d = (set.uncertainty() - closed).abs();
                worst = worst.max(d);
                if d.is_nan() || d > tol {
                    failed.push(format!("row {} {} off by {d:.2e}", row.row, set.route.as_str()));
                }
            }
        }
        let detail = if failed.is_empty() {
            format!("7 rows x 2 routes, max |U - closed| = {worst:.2e} (tol {tol:.0e})")
        } else {
            failed.join("; ")
        };
        Ok((failed.is_empty(), detail))
    })
}

/// A random catalog state from criterion 2 and its two position-route U values.
#[derive(Debug, Clone)]
pub struct Draw {
    pub label: String,
    pub is_oscillator: bool,
    pub u_first: f64,
    pub u_delta: f64,
}

/// 50 log-uniform draws for each parameterized family plus the fixed-parameter states.
pub fn random_draws() -> Result<Vec<Draw>> {
    let mut rng = ChaCha8Rng::seed_from_u64(DRAW_SEED);
    let (lo, hi) = (DRAW_RANGE.0.ln(), DRAW_RANGE.1.ln());
    let mut families: Vec<Family> = vec![
        Family::HarmonicOscillator,
        Family::Srm { s: 1.0 },
        Family::Srm { s: 2.0 },
        Family::Morse { lambda: 1.0 },
    ];
    for _ in 0..DRAWS_PER_FAMILY {
        let mut draw = || rng.gen_range(lo..hi).exp();
        families.push(Family::Idw { a: draw() });
        families.push(Family::DeltaWell { alpha: draw() });
        families.push(Family::DeltaInBox { a: draw() });
        families.push(Family::Lorentzian { alpha: draw() });
    }
    families
        .into_iter()
        .map(|f| {
            let state = WaveSpec::new(f)?;
            let [first, delta] = position_routes(&state, &cfg())?;
            let params: Vec<String> = state.params().iter().map(|(k, v)| format!("{k}={v:.6}")).collect();
            Ok(Draw {
                label: format!("{}({})", state.kind(), params.join(",")),
                is_oscillator: matches!(state.family(), Family::HarmonicOscillator),
                u_first: first.uncertainty(),
                u_delta: delta.uncertainty(),
            })
        })
        .collect()
}

pub fn criterion_2(draws: &[Draw]) -> CriterionOutcome {
    timed(2, "route agreement", || {
        let worst = draws
            .iter()
            .map(|d| ((d.u_first - d.u_delta).abs(), d))
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .expect("draws are never empty");
        let pass = draws.iter().all(|d| (d.u_first - d.u_delta).abs() <= ROUTE_AGREEMENT_TOL);
        Ok((pass, format!("{} states, max |dU| = {:.2e} at {} (tol {ROUTE_AGREEMENT_TOL:.0e})", draws.len(), worst.0, worst.1.label)))
    })
}

pub fn criterion_3() -> CriterionOutcome {
    timed(3, "momentum-route equivalence", || {
        let mut pass = true;
        let mut parts = Vec::new();
        for row in table1_rows() {
            let r = equivalence_check(&row.state)?;
            pass &= r.pass;
            parts.push(format!("{} dU={:.1e}/{:.0e} tail={:.1e}", row.state.kind(), r.delta_u, r.tolerance, r.tail_bound));
        }
        Ok((pass, parts.join(", ")))
    })
}

pub fn criterion_4() -> CriterionOutcome {
    timed(4, "explicit duality pair", || {
        let alpha = 1.0;
        let lor = position_routes(&WaveSpec::new(Family::Lorentzian { alpha })?, &cfg())?[0];
        let exp = position_routes(&WaveSpec::new(Family::DeltaWell { alpha })?, &cfg())?[0];
        let du = (lor.uncertainty() - 0.5f64.sqrt()).abs();
        let dx = (lor.dx() - exp.dp()).abs();
        let dp = (lor.dp() - exp.dx()).abs();
        let pass = du <= DUALITY_TOL && dx <= DUALITY_TOL && dp <= DUALITY_TOL;
        Ok((
            pass,
            format!(
                "U(lorentzian) = {:.10}, |U - 1/sqrt2| = {du:.1e}, |dx_L - dp_E| = {dx:.1e}, |dp_L - dx_E| = {dp:.1e} (tol {DUALITY_TOL:.0e})",
                lor.uncertainty()
            ),
        ))
    })
}

/// Σ 1/(z+n)² summed backwards, with the Euler–Maclaurin remainder.
fn trigamma_oracle(z: f64) -> f64 {
    const TERMS: usize = 1_000_000;
    let mut acc = 0.0;
    for n in (0..TERMS).rev() {
        let w = z + n as f64;
        acc += 1.0 / (w * w);
    }
    let w = z + TERMS as f64;
    acc + 1.0 / w + 0.5 / (w * w) + 1.0 / (6.0 * w * w * w)
}

pub fn criterion_5() -> CriterionOutcome {
    timed(5, "trigamma", || {
        let mut worst_oracle: f64 = 0.0;
        for z in [0.5, 1.0, 1.5, 2.0, 5.0, 10.0, 37.3] {
            let v = trigamma(z)?.value;
            let o = trigamma_oracle(z);
            worst_oracle = worst_oracle.max(((v - o) / o).abs());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(DRAW_SEED ^ 0x7);
        let mut worst_rec: f64 = 0.0;
        for _ in 0..RECURRENCE_POINTS {
            let z: f64 = rng.gen_range(0.5f64.ln()..100f64.ln()).exp();
            let r = trigamma(z)?.value - trigamma(z + 1.0)?.value - 1.0 / (z * z);
            worst_rec = worst_rec.max(r.abs());
        }
        let s1 = (trigamma(1.0)?.value - PI * PI / 6.0).abs();
        let sh = (trigamma(0.5)?.value - PI * PI / 2.0).abs();
        let pass = worst_oracle <= TRIGAMMA_ORACLE_REL_TOL
            && worst_rec <= TRIGAMMA_RECURRENCE_TOL
            && s1 <= TRIGAMMA_SPECIAL_TOL
            && sh <= TRIGAMMA_SPECIAL_TOL;
        Ok((
            pass,
            format!("oracle rel {worst_oracle:.1e}, recurrence {worst_rec:.1e}, psi'(1) {s1:.1e}, psi'(1/2) {sh:.1e}"),
        ))
    })
}

pub fn criterion_6() -> CriterionOutcome {
    timed(6, "deep-well limit", || {
        let grid = powers_of_two(20);
        let mut pass = true;
        let mut parts = Vec::new();
        for fam in [LimitFamily::Srm, LimitFamily::Morse] {
            let scan = limit_scan(fam, &grid)?;
            let last = *scan.excess.last().expect("grid is non-empty");
            let ok_excess = last <= DEEP_WELL_EXCESS_TOL;
            let ok_exp = (scan.fitted_exponent - DEEP_WELL_EXPONENT).abs() <= DEEP_WELL_EXPONENT_TOL;
            pass &= ok_excess && ok_exp;
            parts.push(format!(
                "{fam}: U(2^20)-1/2 = {last:.2e}{}, exponent {:.4}{}",
                if ok_excess { "" } else { " (too large)" },
                scan.fitted_exponent,
                if ok_exp { "" } else { " (expected -1 +/- 0.05)" }
            ));
        }
        Ok((pass, parts.join("; ")))
    })
}

pub fn criterion_7(draws: &[Draw]) -> CriterionOutcome {
    timed(7, "Heisenberg property", || {
        let mut pass = true;
        let mut min_other = f64::INFINITY;
        let mut oscillator = f64::NAN;
        for d in draws {
            for u in [d.u_first, d.u_delta] {
                pass &= u >= 0.5 - HEISENBERG_TOLERANCE;
                if d.is_oscillator {
                    oscillator = u;
                    pass &= (u - 0.5).abs() <= HEISENBERG_TOLERANCE;
                } else {
                    min_other = min_other.min(u);
                    pass &= u - 0.5 > NON_MINIMAL_MARGIN;
                }
            }
        }
        Ok((pass, format!("oscillator U = {oscillator:.12}, smallest other U = {min_other:.6}")))
    })
}

pub fn criterion_8() -> CriterionOutcome {
    timed(8, "distributional bookkeeping", || {
        let well = momentum_sq_delta_decomposition(&WaveSpec::new(Family::DeltaWell { alpha: 1.0 })?, &cfg())?;
        let boxed = momentum_sq_delta_decomposition(&WaveSpec::new(Family::DeltaInBox { a: 1.0 })?, &cfg())?;
        let errs = [
            (well.regular.value + 1.0).abs(),
            (well.delta - 2.0).abs(),
            (well.total().value - 1.0).abs(),
            boxed.regular.value.abs(),
            (boxed.delta - 3.0).abs(),
            (boxed.total().value - 3.0).abs(),
        ];
        let worst = errs.iter().fold(0.0f64, |m, e| m.max(*e));
        Ok((
            worst <= BOOKKEEPING_TOL,
            format!(
                "well: regular {:.12} delta {:.12}; box: regular {:.3e} delta {:.12}; max error {worst:.1e}",
                well.regular.value, well.delta, boxed.regular.value, boxed.delta
            ),
        ))
    })
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

pub fn criterion_9() -> CriterionOutcome {
    timed(9, "Fourier closed forms", || {
        let mut pass = true;
        let mut parts = Vec::new();
        for row in table1_rows() {
            let (lo, hi) = match row.row {
                5 => (-5.0, 5.0),
                6 | 7 | 1 => (-20.0, 20.0),
                _ => (-10.0, 10.0),
            };
            let res = closed_phi_residual(&row.state, &linspace(lo, hi, 81))?;
            let (value, tol) = if row.row == 5 { (res.max_modulus_sq, PHI_MODULUS_SQ_TOL) } else { (res.max_modulus, PHI_MODULUS_TOL) };
            // Row 1 carries no residual threshold; only its Parseval defect is checked.
            if row.row != 1 {
                pass &= value <= tol;
            }
            let m = momentum_moments(&row.state, default_p_max(&row.state), &cfg())?;
            let defect = m.corrected_parseval_defect();
            let parseval_ok = defect <= m.parseval_tail_bound + PARSEVAL_SLACK;
            pass &= parseval_ok;
            parts.push(format!("row {} res {value:.1e} parseval {defect:.1e}<={:.1e}", row.row, m.parseval_tail_bound + PARSEVAL_SLACK));
        }
        Ok((pass, parts.join(", ")))
    })
}

/// The triangle state √(3/2)(1 − |x|) sampled on [−1, 1].
pub fn triangle_samples(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let x = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
            (x, 1.5f64.sqrt() * (1.0 - x.abs()))
        })
        .collect()
}

pub fn criterion_10() -> CriterionOutcome {
    timed(10, "ingestion round trip", || {
        let state = WaveSpec::ingest_tabulated(&triangle_samples(INGESTION_SAMPLES), &[0.0])?;
        let u = position_routes(&state, &cfg())?[0].uncertainty();
        let d = (u - 0.3f64.sqrt()).abs();
        Ok((d <= INGESTION_TOL, format!("U = {u:.10}, |U - sqrt(3/10)| = {d:.1e} (tol {INGESTION_TOL:.0e})")))
    })
}

/// Runs all ten criteria in order.
pub fn run_all(tol: &SuiteTolerances) -> Vec<CriterionOutcome> {
    let start = Instant::now();
    let draws = random_draws();
    let draw_seconds = start.elapsed().as_secs_f64();
    let with_draws = |id: u8, f: fn(&[Draw]) -> CriterionOutcome| match &draws {
        Ok(d) => {
            let mut o = f(d);
            o.seconds += draw_seconds;
            o
        }
        Err(e) => CriterionOutcome {
            id,
            name: if id == 2 { "route agreement" } else { "Heisenberg property" },
            pass: false,
            detail: format!("error: {e}"),
            seconds: draw_seconds,
        },
    };
    vec![
        criterion_1(tol.table1),
        with_draws(2, criterion_2),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        with_draws(7, criterion_7),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ]
}
