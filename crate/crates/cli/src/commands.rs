//! One function per subcommand. Each builds a serializable report and
//! counts the failures that become the exit code.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use unclab::acceptance::{run_all, table1_rows, CriterionOutcome, SuiteTolerances};
use unclab::asymptotics::{geometric_grid, limit_scan, LimitFamily, LimitScan};
use unclab::fourier::{closed_phi_residual, default_p_max, momentum_moments, momentum_profile, MomentumMoments, PhiResidual};
use unclab::moments::HEISENBERG_TOLERANCE;
use unclab::{uncertainty, Error, Family, QuadratureConfig, StateKind, WaveSpec};

use crate::output::{num, short, Report, Table};

/// Momentum-route agreement accepted for kinked rows of Table 1.
pub const KINKED_MOMENTUM_TOL: f64 = 1e-3;

#[derive(Debug)]
pub enum CliError {
    /// bad arguments or input data; exit code 2
    Usage(String),
    /// the computation itself failed; exit code 1
    Failure(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::UnsupportedCatalog(_) | Error::Ingestion { .. } | Error::Config(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failure(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parameters as given on the command line.
#[derive(Debug, Clone, Default)]
pub struct StateParams {
    pub a: Option<f64>,
    pub alpha: Option<f64>,
    pub s: Option<f64>,
    pub lambda: Option<f64>,
    pub file: Option<std::path::PathBuf>,
    pub kinks: Vec<f64>,
}

/// Reads a two-column `x,psi` CSV file.
pub fn read_samples(path: &Path) -> CliResult<Vec<(f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let headers = rdr.headers().map_err(|e| CliError::Usage(e.to_string()))?.clone();
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "psi" {
        return Err(CliError::Usage(format!("{}: expected header 'x,psi', found '{}'", path.display(), headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<(f64, f64)>().enumerate() {
        let row = rec.map_err(|e| CliError::Usage(format!("{}: sample {i}: {e}", path.display())))?;
        out.push(row);
    }
    Ok(out)
}

pub fn build_state(kind: StateKind, p: &StateParams) -> CliResult<WaveSpec> {
    let allowed = kind.parameter_names();
    for (name, given) in [("a", p.a.is_some()), ("alpha", p.alpha.is_some()), ("s", p.s.is_some()), ("lambda", p.lambda.is_some())] {
        if given && !allowed.contains(&name) {
            return Err(CliError::Usage(format!("--{name} does not apply to {kind}")));
        }
    }
    if kind != StateKind::Tabulated && (p.file.is_some() || !p.kinks.is_empty()) {
        return Err(CliError::Usage(format!("--file and --kinks apply only to tabulated states, not {kind}")));
    }
    let family = match kind {
        StateKind::Idw => Family::Idw { a: p.a.unwrap_or(1.0) },
        StateKind::Ho => Family::HarmonicOscillator,
        StateKind::Srm => Family::Srm { s: p.s.unwrap_or(1.0) },
        StateKind::Morse => Family::Morse { lambda: p.lambda.unwrap_or(1.0) },
        StateKind::DeltaWell => Family::DeltaWell { alpha: p.alpha.unwrap_or(1.0) },
        StateKind::DeltaInBox => Family::DeltaInBox { a: p.a.unwrap_or(1.0) },
        StateKind::Lorentzian => Family::Lorentzian { alpha: p.alpha.unwrap_or(1.0) },
        StateKind::Tabulated => {
            let file = p.file.as_ref().ok_or_else(|| CliError::Usage("tabulated states need --file".into()))?;
            let samples = read_samples(file)?;
            return Ok(WaveSpec::ingest_tabulated(&samples, &p.kinks)?);
        }
    };
    Ok(WaveSpec::new(family)?)
}

fn params_map(state: &WaveSpec) -> BTreeMap<&'static str, f64> {
    state.params().into_iter().collect()
}

fn describe(state: &WaveSpec) -> String {
    let params = state.params();
    if params.is_empty() {
        return state.kind().to_string();
    }
    let inner: Vec<String> = params.iter().map(|(k, v)| format!("{k} = {v}")).collect();
    format!("{} ({})", state.kind(), inner.join(", "))
}

// ---------------------------------------------------------------- list

#[derive(Serialize)]
pub struct ListEntry {
    pub state: StateKind,
    pub parameters: Vec<&'static str>,
    pub description: &'static str,
}

#[derive(Serialize)]
pub struct ListReport {
    pub states: Vec<ListEntry>,
}

pub fn list() -> ListReport {
    ListReport {
        states: StateKind::ALL
            .iter()
            .map(|&k| ListEntry { state: k, parameters: k.parameter_names().to_vec(), description: k.description() })
            .collect(),
    }
}

impl Report for ListReport {
    fn human(&self) -> String {
        let mut s = String::new();
        for e in &self.states {
            let params = if e.parameters.is_empty() { "-".to_string() } else { e.parameters.iter().map(|p| format!("--{p}")).collect::<Vec<_>>().join(" ") };
            let _ = writeln!(s, "{:<14} {:<10} {}", e.state.as_str(), params, e.description);
        }
        s
    }

    fn table(&self) -> Table {
        Table {
            header: vec!["state", "parameters", "description"],
            rows: self.states.iter().map(|e| vec![e.state.to_string(), e.parameters.join(";"), e.description.to_string()]).collect(),
        }
    }
}

// --------------------------------------------------------- uncertainty

#[derive(Serialize)]
pub struct RouteEntry {
    pub name: &'static str,
    #[serde(rename = "U")]
    pub u: f64,
    pub est_error: f64,
}

#[derive(Serialize)]
pub struct MomentumSummary {
    pub p_max: f64,
    pub tail_correction: f64,
    pub tail_bound: f64,
    pub parseval_defect: f64,
    pub flagged: bool,
}

impl From<&MomentumMoments> for MomentumSummary {
    fn from(m: &MomentumMoments) -> Self {
        Self { p_max: m.p_max, tail_correction: m.tail_correction, tail_bound: m.tail_bound, parseval_defect: m.parseval_defect, flagged: m.flagged }
    }
}

#[derive(Serialize)]
pub struct UncertaintyOut {
    pub state: StateKind,
    pub params: BTreeMap<&'static str, f64>,
    pub dx: f64,
    pub dp: f64,
    #[serde(rename = "U")]
    pub u: f64,
    pub routes: Vec<RouteEntry>,
    pub heisenberg_ok: bool,
    pub discrepancy: f64,
    #[serde(rename = "closed_U")]
    pub closed_u: Option<f64>,
    pub closed_deviation: Option<f64>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub momentum: Option<MomentumSummary>,
    pub pass: bool,
    #[serde(skip)]
    label: String,
}

pub fn uncertainty_cmd(state: &WaveSpec, with_momentum: bool, p_max: Option<f64>, tol: f64) -> CliResult<UncertaintyOut> {
    let cfg = QuadratureConfig::default();
    let mom = if with_momentum {
        Some(momentum_moments(state, p_max.unwrap_or_else(|| default_p_max(state)), &cfg)?)
    } else {
        None
    };
    let r = uncertainty(state, &cfg, mom.as_ref().map(|m| &m.set))?;
    let closed_ok = r.closed_deviation.is_none_or(|d| d <= tol);
    Ok(UncertaintyOut {
        state: state.kind(),
        params: params_map(state),
        dx: r.dx,
        dp: r.dp,
        u: r.u,
        routes: r.routes.iter().map(|x| RouteEntry { name: x.route.as_str(), u: x.u, est_error: x.est_error }).collect(),
        heisenberg_ok: r.heisenberg_ok,
        discrepancy: r.max_route_discrepancy,
        closed_u: r.closed_u,
        closed_deviation: r.closed_deviation,
        tolerance: tol,
        momentum: mom.as_ref().map(MomentumSummary::from),
        pass: closed_ok && r.heisenberg_ok,
        label: describe(state),
    })
}

impl UncertaintyOut {
    pub fn failures(&self) -> usize {
        usize::from(!self.pass)
    }
}

impl Report for UncertaintyOut {
    fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "state         {}", self.label);
        let _ = writeln!(s, "dx            {}", num(self.dx));
        let _ = writeln!(s, "dp            {}", num(self.dp));
        let _ = writeln!(s, "U             {}", num(self.u));
        if let (Some(c), Some(d)) = (self.closed_u, self.closed_deviation) {
            let _ = writeln!(s, "closed U      {}  |diff| {} (tol {})", num(c), short(d), short(self.tolerance));
        }
        let _ = writeln!(s, "heisenberg    {}", if self.heisenberg_ok { "ok" } else { "VIOLATED" });
        let _ = writeln!(s, "routes");
        for r in &self.routes {
            let _ = writeln!(s, "  {:<24} {}  +- {}", r.name, num(r.u), short(r.est_error));
        }
        if let Some(m) = &self.momentum {
            let _ = writeln!(s, "momentum      p_max {}  tail {}  bound {}{}", m.p_max, short(m.tail_correction), short(m.tail_bound), if m.flagged { "  FLAGGED" } else { "" });
        }
        let _ = writeln!(s, "result        {}", if self.pass { "PASS" } else { "FAIL" });
        s
    }

    fn table(&self) -> Table {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={}", num(*v))).collect();
        Table {
            header: vec!["state", "params", "route", "U", "est_error"],
            rows: self
                .routes
                .iter()
                .map(|r| vec![self.state.to_string(), params.join(";"), r.name.to_string(), num(r.u), num(r.est_error)])
                .collect(),
        }
    }

    fn notes(&self) -> Vec<(&'static str, String)> {
        let mut v = vec![("dx", num(self.dx)), ("dp", num(self.dp)), ("U", num(self.u)), ("heisenberg_ok", self.heisenberg_ok.to_string()), ("discrepancy", num(self.discrepancy))];
        if let Some(c) = self.closed_u {
            v.push(("closed_U", num(c)));
        }
        v
    }
}

// -------------------------------------------------------------- table1

#[derive(Serialize)]
pub struct Table1Route {
    pub name: &'static str,
    #[serde(rename = "U")]
    pub u: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct Table1Entry {
    pub row: u8,
    pub state: StateKind,
    pub params: BTreeMap<&'static str, f64>,
    pub closed_form: &'static str,
    #[serde(rename = "closed_U")]
    pub closed_u: f64,
    pub routes: Vec<Table1Route>,
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct Table1Report {
    pub rows: Vec<Table1Entry>,
    pub failures: usize,
    pub pass: bool,
}

pub fn table1(tol: f64) -> Table1Report {
    let cfg = QuadratureConfig::default();
    let rows: Vec<Table1Entry> = table1_rows()
        .into_par_iter()
        .map(|row| {
            let closed = row.state.closed_u().unwrap_or(f64::NAN);
            let mut entry = Table1Entry {
                row: row.row,
                state: row.state.kind(),
                params: params_map(&row.state),
                closed_form: row.closed_form,
                closed_u: closed,
                routes: Vec::new(),
                error: None,
                pass: false,
            };
            let computed = momentum_moments(&row.state, default_p_max(&row.state), &cfg).and_then(|m| uncertainty(&row.state, &cfg, Some(&m.set)));
            match computed {
                Ok(r) => {
                    for x in &r.routes {
                        let t = if x.route == unclab::Route::Momentum && !row.state.is_smooth() { KINKED_MOMENTUM_TOL } else { tol };
                        let d = (x.u - closed).abs();
                        entry.routes.push(Table1Route { name: x.route.as_str(), u: x.u, abs_diff: d, tolerance: t, pass: d <= t });
                    }
                    entry.pass = entry.routes.iter().all(|r| r.pass);
                }
                Err(e) => entry.error = Some(format!("row {}: {e}", row.row)),
            }
            entry
        })
        .collect();
    let failures = rows.iter().filter(|r| !r.pass).count();
    Table1Report { rows, failures, pass: failures == 0 }
}

impl Report for Table1Report {
    fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<4} {:<13} {:<20} {:<24} {:<22} {:<10} result", "row", "state", "closed form", "route", "U", "|diff|");
        for e in &self.rows {
            if let Some(err) = &e.error {
                let _ = writeln!(s, "{:<4} {:<13} {:<20} ERROR {err}", e.row, e.state.as_str(), e.closed_form);
                continue;
            }
            for (i, r) in e.routes.iter().enumerate() {
                let (row, state, form) = if i == 0 { (e.row.to_string(), e.state.as_str(), e.closed_form) } else { (String::new(), "", "") };
                let _ = writeln!(s, "{:<4} {:<13} {:<20} {:<24} {:<22.17} {:<10} {}", row, state, form, r.name, r.u, short(r.abs_diff), if r.pass { "pass" } else { "FAIL" });
            }
        }
        let _ = writeln!(s, "{} of {} rows pass", self.rows.len() - self.failures, self.rows.len());
        s
    }

    fn table(&self) -> Table {
        let mut rows = Vec::new();
        for e in &self.rows {
            for r in &e.routes {
                rows.push(vec![e.row.to_string(), e.state.to_string(), r.name.to_string(), num(r.u), num(e.closed_u), num(r.abs_diff), num(r.tolerance), r.pass.to_string()]);
            }
            if let Some(err) = &e.error {
                rows.push(vec![e.row.to_string(), e.state.to_string(), "error".into(), String::new(), num(e.closed_u), String::new(), String::new(), format!("false: {err}")]);
            }
        }
        Table { header: vec!["row", "state", "route", "U", "closed_U", "abs_diff", "tolerance", "pass"], rows }
    }

    fn notes(&self) -> Vec<(&'static str, String)> {
        vec![("failures", self.failures.to_string())]
    }
}

// -------------------------------------------------------------- limits

#[derive(Serialize)]
#[serde(transparent)]
pub struct LimitsReport(pub LimitScan);

pub fn limits(family: LimitFamily, min: f64, max: f64, points: usize) -> CliResult<LimitsReport> {
    let grid = geometric_grid(min, max, points)?;
    Ok(LimitsReport(limit_scan(family, &grid)?))
}

impl Report for LimitsReport {
    fn human(&self) -> String {
        let scan = &self.0;
        let mut s = String::new();
        let _ = writeln!(s, "{:<24} {:<24} U - 1/2", scan.family.parameter_name(), "U");
        for ((x, u), e) in scan.grid.iter().zip(&scan.u_values).zip(&scan.excess) {
            let _ = writeln!(s, "{:<24} {:<24} {}", num(*x), num(*u), num(*e));
        }
        let _ = writeln!(s, "fitted exponent {:.6} prefactor {:.6} ({} points in the top decade)", scan.fitted_exponent, scan.fitted_prefactor, scan.fit_points);
        s
    }

    fn table(&self) -> Table {
        let scan = &self.0;
        Table {
            header: vec!["parameter", "U", "U_minus_half"],
            rows: scan.grid.iter().zip(&scan.u_values).zip(&scan.excess).map(|((x, u), e)| vec![num(*x), num(*u), num(*e)]).collect(),
        }
    }

    fn notes(&self) -> Vec<(&'static str, String)> {
        vec![
            ("family", self.0.family.to_string()),
            ("fitted_exponent", num(self.0.fitted_exponent)),
            ("fitted_prefactor", num(self.0.fitted_prefactor)),
        ]
    }
}

// ------------------------------------------------------------- fourier

#[derive(Serialize)]
pub struct FourierReport {
    pub state: StateKind,
    pub params: BTreeMap<&'static str, f64>,
    pub p_max: f64,
    pub samples: usize,
    pub p: Vec<f64>,
    pub re_phi: Vec<f64>,
    pub im_phi: Vec<f64>,
    pub abs_phi_sq: Vec<f64>,
    pub closed_residual: Option<PhiResidual>,
    pub parseval_defect: f64,
    pub parseval_tail: f64,
    pub parseval_tail_bound: f64,
    #[serde(skip)]
    label: String,
}

pub fn fourier(state: &WaveSpec, p_max: Option<f64>, samples: usize) -> CliResult<FourierReport> {
    let p_max = p_max.unwrap_or_else(|| default_p_max(state));
    let prof = momentum_profile(state, p_max, samples, &QuadratureConfig::default())?;
    let closed_residual = match state.closed_phi_modulus(0.0) {
        Some(_) => Some(closed_phi_residual(state, &prof.p_grid)?),
        None => None,
    };
    Ok(FourierReport {
        state: state.kind(),
        params: params_map(state),
        p_max,
        samples,
        re_phi: prof.phi_values.iter().map(|c| c.re).collect(),
        im_phi: prof.phi_values.iter().map(|c| c.im).collect(),
        abs_phi_sq: prof.phi_values.iter().map(|c| c.norm_sqr()).collect(),
        p: prof.p_grid,
        closed_residual,
        parseval_defect: prof.parseval_defect,
        parseval_tail: prof.parseval_tail,
        parseval_tail_bound: prof.parseval_tail_bound,
        label: describe(state),
    })
}

impl Report for FourierReport {
    fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "state            {}", self.label);
        let _ = writeln!(s, "p range          [-{}, {}], {} samples", self.p_max, self.p_max, self.samples);
        match &self.closed_residual {
            Some(r) => {
                let _ = writeln!(s, "closed-form residual  |phi| {}  |phi|^2 {}  (worst at p = {})", short(r.max_modulus), short(r.max_modulus_sq), r.worst_p);
            }
            None => {
                let _ = writeln!(s, "closed-form residual  n/a");
            }
        }
        let _ = writeln!(s, "parseval defect  {} (tail model {}, bound {})", short(self.parseval_defect), short(self.parseval_tail), short(self.parseval_tail_bound));
        let _ = writeln!(s, "use --format csv for the curve");
        s
    }

    fn table(&self) -> Table {
        Table {
            header: vec!["p", "re_phi", "im_phi", "abs_phi_sq"],
            rows: (0..self.p.len()).map(|i| vec![num(self.p[i]), num(self.re_phi[i]), num(self.im_phi[i]), num(self.abs_phi_sq[i])]).collect(),
        }
    }

    fn notes(&self) -> Vec<(&'static str, String)> {
        let mut v = vec![("state", self.label.clone()), ("parseval_defect", num(self.parseval_defect)), ("parseval_tail", num(self.parseval_tail)), ("parseval_tail_bound", num(self.parseval_tail_bound))];
        if let Some(r) = &self.closed_residual {
            v.push(("closed_residual_modulus", num(r.max_modulus)));
            v.push(("closed_residual_modulus_sq", num(r.max_modulus_sq)));
        }
        v
    }
}

// -------------------------------------------------------------- ingest

#[derive(Serialize)]
pub struct KinkOut {
    pub location: f64,
    pub jump_psi_prime: f64,
}

#[derive(Serialize)]
pub struct IngestReport {
    pub samples: usize,
    pub normalization: f64,
    pub domain: [f64; 2],
    pub kinks: Vec<KinkOut>,
    pub walls: Vec<KinkOut>,
    #[serde(rename = "U")]
    pub u: f64,
    pub dx: f64,
    pub dp: f64,
    pub discrepancy: f64,
    pub heisenberg_ok: bool,
}

pub fn ingest(state: &WaveSpec) -> CliResult<IngestReport> {
    let r = uncertainty(state, &QuadratureConfig::default(), None)?;
    let params = params_map(state);
    let conv = |k: &unclab::KinkPoint| KinkOut { location: k.location, jump_psi_prime: k.jump_psi_prime };
    Ok(IngestReport {
        samples: params.get("samples").copied().unwrap_or(0.0) as usize,
        normalization: params.get("normalization").copied().unwrap_or(1.0),
        domain: [state.domain().lo, state.domain().hi],
        kinks: state.kinks().iter().map(conv).collect(),
        walls: state.wall_jumps().iter().map(conv).collect(),
        u: r.u,
        dx: r.dx,
        dp: r.dp,
        discrepancy: r.max_route_discrepancy,
        heisenberg_ok: r.heisenberg_ok && r.u >= 0.5 - HEISENBERG_TOLERANCE,
    })
}

impl Report for IngestReport {
    fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "samples        {}", self.samples);
        let _ = writeln!(s, "normalization  {}", num(self.normalization));
        let _ = writeln!(s, "domain         [{}, {}]", self.domain[0], self.domain[1]);
        for k in &self.kinks {
            let _ = writeln!(s, "kink           x = {}  jump in psi' = {}", k.location, num(k.jump_psi_prime));
        }
        for k in &self.walls {
            let _ = writeln!(s, "wall           x = {}  jump in psi' = {}", k.location, num(k.jump_psi_prime));
        }
        let _ = writeln!(s, "U              {}  (dx {}, dp {})", num(self.u), num(self.dx), num(self.dp));
        let _ = writeln!(s, "route spread   {}", short(self.discrepancy));
        s
    }

    fn table(&self) -> Table {
        let mut rows: Vec<Vec<String>> = self.kinks.iter().map(|k| vec!["kink".into(), num(k.location), num(k.jump_psi_prime)]).collect();
        rows.extend(self.walls.iter().map(|k| vec!["wall".into(), num(k.location), num(k.jump_psi_prime)]));
        Table { header: vec!["kind", "location", "jump_psi_prime"], rows }
    }

    fn notes(&self) -> Vec<(&'static str, String)> {
        vec![("samples", self.samples.to_string()), ("normalization", num(self.normalization)), ("U", num(self.u)), ("dx", num(self.dx)), ("dp", num(self.dp))]
    }
}

// ----------------------------------------------------------- check-all

#[derive(Serialize)]
pub struct CheckAllReport {
    pub criteria: Vec<CriterionOutcome>,
    pub failures: usize,
}

pub fn check_all(tol: f64) -> CheckAllReport {
    let criteria = run_all(&SuiteTolerances { table1: tol });
    let failures = criteria.iter().filter(|c| !c.pass).count();
    CheckAllReport { criteria, failures }
}

impl Report for CheckAllReport {
    fn human(&self) -> String {
        let mut s = String::new();
        for c in &self.criteria {
            let _ = writeln!(s, "{}", c.line());
        }
        let _ = writeln!(s, "{} of {} criteria pass", self.criteria.len() - self.failures, self.criteria.len());
        s
    }

    fn table(&self) -> Table {
        Table {
            header: vec!["id", "name", "pass", "detail"],
            rows: self.criteria.iter().map(|c| vec![c.id.to_string(), c.name.to_string(), c.pass.to_string(), c.detail.clone()]).collect(),
        }
    }

    fn notes(&self) -> Vec<(&'static str, String)> {
        vec![("failures", self.failures.to_string())]
    }
}
