//! Exact Fourier series of square (sign) waves defined by their crossing
//! instants, coefficient-decay estimation and periodic orthogonality.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::signal::{Direction, FourierSeries, PeriodicWaveform, ZeroCrossingSet};

/// Coefficients below this magnitude are ignored by the decay fit.
pub const DECAY_FLOOR: f64 = 1e-13;

/// Minimum number of significant harmonics for a power-law fit.
pub const MIN_FIT_HARMONICS: usize = 5;

/// `±amplitude` step function switching at the instants of a crossing set.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareWaveSpec {
    pub amplitude: f64,
    pub crossings: ZeroCrossingSet,
    pub omega: f64,
}

/// Unit square wave `σ(t) ∈ {-1, +1}` over a window `[t_0, t_0 + T)`.
///
/// Switch instants are increasing and may start anywhere; `signs[k]` is the
/// value of `σ` right after `times[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareWave {
    period: f64,
    times: Vec<f64>,
    signs: Vec<f64>,
    // running integral of (σ - mean) at each switch instant, and its period mean
    knots: Vec<f64>,
    mean: f64,
    integral_mean: f64,
}

impl SquareWave {
    /// `times` must be strictly increasing with span below `period`, and of
    /// even length; an empty list gives the constant `+1`.
    pub fn new(period: f64, times: &[f64], first: Direction) -> Result<Self> {
        if !times.len().is_multiple_of(2) {
            return Err(Error::InconsistentCrossings(format!("odd switch count {}", times.len())));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InconsistentCrossings("switch instants must strictly increase".into()));
        }
        if let (Some(a), Some(b)) = (times.first(), times.last()) {
            if b - a >= period {
                return Err(Error::InconsistentCrossings("switch instants span a full period".into()));
            }
        }
        let mut s = first.sign_after();
        let signs: Vec<f64> = times
            .iter()
            .map(|_| {
                let v = s;
                s = -s;
                v
            })
            .collect();
        let m = times.len();
        let seg_len = |k: usize| {
            if k + 1 < m {
                times[k + 1] - times[k]
            } else {
                times[0] + period - times[k]
            }
        };
        let mean = if m == 0 {
            1.0
        } else {
            (0..m).map(|k| signs[k] * seg_len(k)).sum::<f64>() / period
        };
        let mut knots = Vec::with_capacity(m);
        let mut g = 0.0;
        let mut integral = 0.0;
        for (k, sk) in signs.iter().enumerate().take(m) {
            knots.push(g);
            let (len, slope) = (seg_len(k), sk - mean);
            integral += len * (g + 0.5 * slope * len);
            g += slope * len;
        }
        Ok(Self {
            period,
            times: times.to_vec(),
            signs,
            knots,
            mean,
            integral_mean: integral / period,
        })
    }

    pub fn from_set(set: &ZeroCrossingSet) -> Self {
        let cs = set.crossings();
        let first = cs.first().map(|c| c.direction).unwrap_or(Direction::Rising);
        Self::new(set.period(), &set.times(), first).expect("crossing-set invariants")
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let t0 = self.times[0];
        let tau = t0 + (t - t0).rem_euclid(self.period);
        let k = self.times.partition_point(|&x| x <= tau);
        let k = if k == 0 { self.times.len() - 1 } else { k - 1 };
        (k, tau - self.times[k])
    }

    /// `σ(t)`; at an exact switch instant returns the value after the switch.
    pub fn value(&self, t: f64) -> f64 {
        if self.times.is_empty() {
            return 1.0;
        }
        self.signs[self.locate(t).0]
    }

    /// Zero-mean periodic antiderivative of `σ - mean(σ)`: continuous and
    /// piecewise linear with slopes `±1 - mean`.
    pub fn ramp(&self, t: f64) -> f64 {
        if self.times.is_empty() {
            return 0.0;
        }
        let (k, dt) = self.locate(t);
        self.knots[k] + (self.signs[k] - self.mean) * dt - self.integral_mean
    }

    /// Exact trigonometric coefficients of `amplitude · σ(t)` up to `n_max`.
    pub fn series(&self, amplitude: f64, n_max: usize) -> FourierSeries {
        let omega = 2.0 * PI / self.period;
        let mut out = FourierSeries::zero(omega, n_max);
        out.a[0] = amplitude * self.mean;
        for n in 1..=n_max {
            let (mut sa, mut sb) = (0.0, 0.0);
            for (t, s) in self.times.iter().zip(&self.signs) {
                let (sn, cs) = (n as f64 * omega * t).sin_cos();
                sa += s * sn;
                sb += s * cs;
            }
            let k = 2.0 * amplitude / (PI * n as f64);
            out.a[n] = -k * sa;
            out.b[n] = k * sb;
        }
        out
    }
}

/// Series of `sign[i(t)]` for a current with a rising crossing at `t1` and
/// a falling one at `t1 + T/2`: `(4/π) Σ_{n odd} sin[nω(t - t1)] / n`.
pub fn sign_series_two_crossing(t1: f64, omega: f64, n_max: usize) -> FourierSeries {
    let mut out = FourierSeries::zero(omega, n_max.max(1));
    for n in (1..=n_max).step_by(2) {
        let c = 4.0 / (PI * n as f64);
        let (s, co) = (n as f64 * omega * t1).sin_cos();
        // sin(nω(t - t1)) = sin(nωt) cos(nωt1) - cos(nωt) sin(nωt1)
        out.a[n] = -c * s;
        out.b[n] = c * co;
    }
    out
}

/// Exact series of the `±amplitude` step function switching at the crossings.
pub fn sign_series_general(sw: &SquareWaveSpec, n_max: usize) -> Result<FourierSeries> {
    let period = 2.0 * PI / sw.omega;
    if (period - sw.crossings.period()).abs() > 1e-12 * period {
        return Err(Error::InvalidInput(format!(
            "omega implies period {period}, crossing set has {}",
            sw.crossings.period()
        )));
    }
    Ok(SquareWave::from_set(&sw.crossings).series(sw.amplitude, n_max))
}

/// Outcome of a coefficient-decay fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayOrder {
    /// `|c_n| ~ n^{-m}`.
    Polynomial(f64),
    /// Too few harmonics above the floor for a power law.
    SuperPolynomial,
}

impl DecayOrder {
    /// `true` when the order is at least `m` or super-polynomial.
    pub fn at_least(&self, m: f64) -> bool {
        match self {
            DecayOrder::Polynomial(x) => *x >= m,
            DecayOrder::SuperPolynomial => true,
        }
    }
}

/// Negated least-squares slope of `ln|c_n|` against `ln n` over the
/// harmonics in `[n_min, n_max]` whose magnitude exceeds [`DECAY_FLOOR`].
pub fn coefficient_decay_order(f: &FourierSeries, n_min: usize, n_max: usize) -> Result<DecayOrder> {
    if n_min == 0 || n_max > f.n_h() || n_max < n_min + MIN_FIT_HARMONICS - 1 {
        return Err(Error::InvalidInput(format!(
            "fit range [{n_min}, {n_max}] needs n_min >= 1, n_max <= {} and at least {MIN_FIT_HARMONICS} harmonics",
            f.n_h()
        )));
    }
    let pts: Vec<(f64, f64)> = (n_min..=n_max)
        .filter_map(|n| {
            let c = f.magnitude(n);
            (c >= DECAY_FLOOR).then(|| ((n as f64).ln(), c.ln()))
        })
        .collect();
    if pts.len() < MIN_FIT_HARMONICS {
        return Ok(DecayOrder::SuperPolynomial);
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(DecayOrder::Polynomial(-sxy / sxx))
}

/// Period mean of `g · di/dt` by the periodic trapezoid rule.
pub fn periodic_orthogonality(g_of_i: &PeriodicWaveform, didt: &PeriodicWaveform) -> Result<f64> {
    g_of_i.check_same_grid(didt)?;
    let s: f64 = g_of_i.samples().iter().zip(didt.samples()).map(|(g, d)| g * d).sum();
    Ok(s / g_of_i.len() as f64)
}
