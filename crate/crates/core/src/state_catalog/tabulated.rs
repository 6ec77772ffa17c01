//! User-tabulated wavefunctions: natural cubic splines on each kink-free
//! segment, joined continuously at the declared kinks.

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Interval, QuadratureConfig};

pub const MIN_SAMPLES: usize = 64;

#[derive(Debug, Clone)]
struct Segment {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// second derivatives at the knots (natural: zero at both ends)
    ms: Vec<f64>,
}

impl Segment {
    fn natural(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        let mut ms = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior equations.
            let m = n - 2;
            let mut diag = vec![0.0; m];
            let mut upper = vec![0.0; m];
            let mut rhs = vec![0.0; m];
            for k in 0..m {
                let i = k + 1;
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                diag[k] = 2.0 * (h0 + h1);
                upper[k] = h1;
                rhs[k] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
            }
            for k in 1..m {
                let lower = xs[k + 1] - xs[k];
                let w = lower / diag[k - 1];
                diag[k] -= w * upper[k - 1];
                rhs[k] -= w * rhs[k - 1];
            }
            let mut sol = vec![0.0; m];
            sol[m - 1] = rhs[m - 1] / diag[m - 1];
            for k in (0..m - 1).rev() {
                sol[k] = (rhs[k] - upper[k] * sol[k + 1]) / diag[k];
            }
            ms[1..n - 1].copy_from_slice(&sol);
        }
        Self { xs, ys, ms }
    }

    fn lo(&self) -> f64 {
        self.xs[0]
    }

    fn hi(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    fn interval_index(&self, x: f64) -> usize {
        let n = self.xs.len();
        match self.xs.binary_search_by(|k| k.total_cmp(&x)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    /// (ψ, ψ′, ψ″) at x, using the spline piece that contains x.
    fn eval(&self, x: f64) -> (f64, f64, f64) {
        let i = self.interval_index(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.ms[i], self.ms[i + 1]);
        let h = x1 - x0;
        let a = (x1 - x) / h;
        let b = 1.0 - a;
        let y = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let dy = (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0 + (3.0 * b * b - 1.0) / 6.0 * h * m1;
        let d2y = a * m0 + b * m1;
        (y, dy, d2y)
    }

    fn scale(&mut self, k: f64) {
        self.ys.iter_mut().for_each(|y| *y *= k);
        self.ms.iter_mut().for_each(|m| *m *= k);
    }
}

/// A spline reconstruction of sampled ψ values, normalized to ∫ψ² = 1.
#[derive(Debug, Clone)]
pub struct TabulatedState {
    segments: Vec<Segment>,
    /// factor applied to the raw samples by renormalization
    pub normalization: f64,
    pub sample_count: usize,
}

impl TabulatedState {
    pub(crate) fn build(samples: &[(f64, f64)], kink_locations: &[f64]) -> Result<(Self, Vec<(f64, f64)>)> {
        if samples.len() < MIN_SAMPLES {
            return Err(Error::Ingestion {
                index: samples.len(),
                reason: format!("need at least {MIN_SAMPLES} samples, got {}", samples.len()),
            });
        }
        for (i, &(x, y)) in samples.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::Ingestion { index: i, reason: format!("non-finite sample ({x}, {y})") });
            }
            if i > 0 && x <= samples[i - 1].0 {
                return Err(Error::Ingestion { index: i, reason: format!("x = {x} is not strictly increasing") });
            }
        }

        let x_first = samples[0].0;
        let x_last = samples[samples.len() - 1].0;
        let match_tol = 1e-9 * (x_last - x_first);
        let mut cut_indices = Vec::with_capacity(kink_locations.len());
        for (k, &loc) in kink_locations.iter().enumerate() {
            let pos = samples.partition_point(|s| s.0 < loc - match_tol);
            let hit = pos < samples.len() && (samples[pos].0 - loc).abs() <= match_tol;
            if !hit {
                return Err(Error::Ingestion { index: k, reason: format!("kink {loc} is not a sample point") });
            }
            if pos == 0 || pos == samples.len() - 1 {
                return Err(Error::Ingestion { index: k, reason: format!("kink {loc} lies on the domain boundary") });
            }
            cut_indices.push(pos);
        }
        cut_indices.sort_unstable();
        cut_indices.dedup();

        let mut segments = Vec::with_capacity(cut_indices.len() + 1);
        let mut start = 0;
        for &cut in cut_indices.iter().chain(std::iter::once(&(samples.len() - 1))) {
            let (xs, ys) = samples[start..=cut].iter().copied().unzip();
            segments.push(Segment::natural(xs, ys));
            start = cut;
        }

        let mut state = Self { segments, normalization: 1.0, sample_count: samples.len() };
        let knots = state.interior_knots();
        let cfg = QuadratureConfig::default().with_budget(4 * samples.len() + 64);
        let norm = integrate(|x| state.value(x).powi(2), Interval::finite(x_first, x_last), &knots, &cfg)?;
        if norm.value.is_nan() || norm.value <= 0.0 {
            return Err(Error::Ingestion { index: 0, reason: "samples have zero norm".into() });
        }
        let k = norm.value.sqrt().recip();
        state.segments.iter_mut().for_each(|s| s.scale(k));
        state.normalization = k;

        let amplitude = state.segments.iter().flat_map(|s| s.ys.iter()).fold(0.0f64, |m, y| m.max(y.abs()));
        let mut kinks = Vec::with_capacity(cut_indices.len());
        for (j, &cut) in cut_indices.iter().enumerate() {
            let loc = samples[cut].0;
            let left = state.segments[j].eval(loc).1;
            let right = state.segments[j + 1].eval(loc).1;
            let jump = right - left;
            if jump.abs() <= 1e-12 * amplitude.max(f64::MIN_POSITIVE) {
                return Err(Error::Ingestion { index: cut, reason: format!("kink at {loc} has no derivative jump") });
            }
            kinks.push((loc, jump));
        }
        Ok((state, kinks))
    }

    pub fn lo(&self) -> f64 {
        self.segments[0].lo()
    }

    pub fn hi(&self) -> f64 {
        self.segments[self.segments.len() - 1].hi()
    }

    /// Every knot strictly inside the domain, including kinks.
    pub fn interior_knots(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.segments.iter().flat_map(|s| s.xs.iter().copied()).collect();
        out.dedup();
        out.retain(|&x| x > self.lo() && x < self.hi());
        out
    }

    fn segment_for(&self, x: f64, prefer_right: bool) -> &Segment {
        let idx = self.segments.partition_point(|s| if prefer_right { s.hi() <= x } else { s.hi() < x });
        &self.segments[idx.min(self.segments.len() - 1)]
    }

    pub(crate) fn value(&self, x: f64) -> f64 {
        if x < self.lo() || x > self.hi() {
            return 0.0;
        }
        self.segment_for(x, false).eval(x).0
    }

    /// (ψ′, ψ″); `prefer_right` picks the right-hand piece at a segment boundary.
    pub(crate) fn derivatives(&self, x: f64, prefer_right: bool) -> (f64, f64) {
        if x < self.lo() || x > self.hi() {
            return (0.0, 0.0);
        }
        let (_, d1, d2) = self.segment_for(x, prefer_right).eval(x);
        (d1, d2)
    }
}
