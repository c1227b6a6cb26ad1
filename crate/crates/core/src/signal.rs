//! Periodic signals, their trigonometric representation, crossing sets and
//! linear ballast descriptors.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Default number of samples per period.
pub const DEFAULT_GRID: usize = 4096;

/// Minimum number of samples a waveform may carry.
pub const MIN_GRID: usize = 16;

/// Physical unit tag. Advisory only; arithmetic is SI and unit-agnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Volt,
    Ampere,
    Dimensionless,
}

/// A `T`-periodic real signal sampled at `t_j = j T / N`, `j = 0..N`.
///
/// The sample at `t = T` is the sample at `t = 0` and is not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicWaveform {
    period: f64,
    samples: Vec<f64>,
    unit: Unit,
}

impl PeriodicWaveform {
    pub fn new(period: f64, samples: Vec<f64>, unit: Unit) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidInput(format!("period must be positive, got {period}")));
        }
        if samples.len() < MIN_GRID {
            return Err(Error::InvalidInput(format!(
                "waveform needs at least {MIN_GRID} samples, got {}",
                samples.len()
            )));
        }
        if let Some(j) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("sample {j} is not finite")));
        }
        Ok(Self { period, samples, unit })
    }

    /// Samples `f` on the uniform grid of `n` points over one period.
    pub fn from_fn(period: f64, n: usize, unit: Unit, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = period / n as f64;
        Self::new(period, (0..n).map(|j| f(j as f64 * h)).collect(), unit)
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.period / self.samples.len() as f64
    }

    pub fn time(&self, j: usize) -> f64 {
        j as f64 * self.step()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (0..self.samples.len()).map(move |j| j as f64 * h)
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Mean over one period (the periodic trapezoid rule).
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Returns a waveform on the same grid with every sample mapped by `f`.
    pub fn map(&self, unit: Unit, f: impl Fn(f64) -> f64) -> Self {
        Self {
            period: self.period,
            samples: self.samples.iter().map(|&x| f(x)).collect(),
            unit,
        }
    }

    /// Errors unless `other` lives on the same grid and period.
    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.samples.len() != other.samples.len() {
            return Err(Error::GridMismatch(format!(
                "{} vs {} samples",
                self.samples.len(),
                other.samples.len()
            )));
        }
        if (self.period - other.period).abs() > 1e-12 * self.period {
            return Err(Error::GridMismatch(format!(
                "period {} vs {}",
                self.period, other.period
            )));
        }
        Ok(())
    }

    /// Periodic central-difference derivative.
    pub fn derivative(&self) -> Self {
        let n = self.samples.len();
        let h2 = 2.0 * self.step();
        let x = &self.samples;
        Self {
            period: self.period,
            samples: (0..n).map(|j| (x[(j + 1) % n] - x[(j + n - 1) % n]) / h2).collect(),
            unit: self.unit,
        }
    }
}

/// Real trigonometric series `a_0 + Σ_{n≥1} a_n cos(nωt) + b_n sin(nωt)`.
///
/// `a[0]` is the mean; `b[0]` is always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    pub omega: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl FourierSeries {
    pub fn zero(omega: f64, n_h: usize) -> Self {
        Self { omega, a: vec![0.0; n_h + 1], b: vec![0.0; n_h + 1] }
    }

    pub fn new(omega: f64, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::InvalidInput("cos/sin coefficient lists must match and be non-empty".into()));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidInput(format!("omega must be positive, got {omega}")));
        }
        if a.iter().chain(&b).any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite Fourier coefficient".into()));
        }
        Ok(Self { omega, a, b })
    }

    /// A single tone `sin(ωt)`.
    pub fn sine(omega: f64) -> Self {
        let mut s = Self::zero(omega, 1);
        s.b[1] = 1.0;
        s
    }

    /// Builds a series from complex phasors `X_n` with `x(t) = Σ Re(X_n e^{jnωt})`.
    pub fn from_phasors(omega: f64, phasors: &[Complex64]) -> Self {
        let a = phasors.iter().map(|p| p.re).collect();
        let mut b: Vec<f64> = phasors.iter().map(|p| -p.im).collect();
        if let Some(b0) = b.first_mut() {
            *b0 = 0.0;
        }
        Self { omega, a, b }
    }

    /// Highest harmonic index carried.
    pub fn n_h(&self) -> usize {
        self.a.len() - 1
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// Phasor `a_n - j b_n` of harmonic `n` (zero beyond the stored range).
    pub fn phasor(&self, n: usize) -> Complex64 {
        if n > self.n_h() {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(self.a[n], -self.b[n])
        }
    }

    /// Amplitude `sqrt(a_n² + b_n²)` of harmonic `n`.
    pub fn magnitude(&self, n: usize) -> f64 {
        self.a[n].hypot(self.b[n])
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            omega: self.omega,
            a: self.a.iter().map(|c| c * k).collect(),
            b: self.b.iter().map(|c| c * k).collect(),
        }
    }

    /// Pointwise evaluation at an arbitrary instant.
    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = self.a[0];
        for n in 1..=self.n_h() {
            if self.a[n] == 0.0 && self.b[n] == 0.0 {
                continue;
            }
            let (s, c) = (n as f64 * self.omega * t).sin_cos();
            acc += self.a[n] * c + self.b[n] * s;
        }
        acc
    }
}

/// `cos(2πk/N)`, `sin(2πk/N)` for `k = 0..N`.
fn trig_table(n: usize) -> (Vec<f64>, Vec<f64>) {
    (0..n)
        .map(|k| {
            let (s, c) = (2.0 * PI * k as f64 / n as f64).sin_cos();
            (c, s)
        })
        .unzip()
}

/// Discrete trigonometric projection of `w` onto harmonics `0..=n_h`.
pub fn to_fourier(w: &PeriodicWaveform, n_h: usize) -> Result<FourierSeries> {
    to_fourier_with(w, n_h, Exec::default())
}

pub fn to_fourier_with(w: &PeriodicWaveform, n_h: usize, exec: Exec) -> Result<FourierSeries> {
    let n = w.len();
    if n_h == 0 || 2 * n_h >= n {
        return Err(Error::TooManyHarmonics { n_h, n });
    }
    let (cos_t, sin_t) = trig_table(n);
    let x = w.samples();
    let coeffs = exec.map_range(n_h + 1, |h| {
        if h == 0 {
            return (x.iter().sum::<f64>() / n as f64, 0.0);
        }
        let (mut ca, mut cb) = (0.0, 0.0);
        let mut k = 0usize;
        for &xj in x {
            ca += xj * cos_t[k];
            cb += xj * sin_t[k];
            k += h;
            if k >= n {
                k -= n;
            }
        }
        (2.0 * ca / n as f64, 2.0 * cb / n as f64)
    });
    let (a, b) = coeffs.into_iter().unzip();
    Ok(FourierSeries { omega: w.omega(), a, b })
}

/// Pointwise trigonometric sum of `f` on `n` uniform points over `2π/ω`.
pub fn synthesize(f: &FourierSeries, n: usize, unit: Unit) -> Result<PeriodicWaveform> {
    synthesize_with(f, n, unit, Exec::default())
}

pub fn synthesize_with(f: &FourierSeries, n: usize, unit: Unit, exec: Exec) -> Result<PeriodicWaveform> {
    if n < MIN_GRID {
        return Err(Error::InvalidInput(format!("grid needs at least {MIN_GRID} points, got {n}")));
    }
    let (cos_t, sin_t) = trig_table(n);
    let active: Vec<usize> = (1..=f.n_h()).filter(|&h| f.a[h] != 0.0 || f.b[h] != 0.0).collect();
    let samples = exec.map_range(n, |j| {
        let mut acc = f.a[0];
        for &h in &active {
            let k = (h * j) % n;
            acc += f.a[h] * cos_t[k] + f.b[h] * sin_t[k];
        }
        acc
    });
    PeriodicWaveform::new(f.period(), samples, unit)
}

/// Crossing orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `-/+`: the signal goes from negative to positive.
    Rising,
    /// `+/-`: the signal goes from positive to negative.
    Falling,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Rising => Direction::Falling,
            Direction::Falling => Direction::Rising,
        }
    }

    /// Sign of the signal just after a crossing of this direction.
    pub fn sign_after(self) -> f64 {
        match self {
            Direction::Rising => 1.0,
            Direction::Falling => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::Rising => "-/+",
            Direction::Falling => "+/-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub time: f64,
    pub direction: Direction,
}

/// Ordered crossings `{t_k}` within one period `[0, T)`.
///
/// Always even in count, strictly increasing and alternating in direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCrossingSet {
    period: f64,
    crossings: Vec<Crossing>,
}

impl ZeroCrossingSet {
    pub fn new(period: f64, crossings: Vec<Crossing>) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidInput(format!("period must be positive, got {period}")));
        }
        if !crossings.len().is_multiple_of(2) {
            return Err(Error::InconsistentCrossings(format!(
                "odd crossing count {} in one period",
                crossings.len()
            )));
        }
        for (k, c) in crossings.iter().enumerate() {
            if !(c.time >= 0.0 && c.time < period) {
                return Err(Error::InconsistentCrossings(format!(
                    "crossing {k} at {} lies outside [0, {period})",
                    c.time
                )));
            }
        }
        for w in crossings.windows(2) {
            if w[1].time <= w[0].time {
                return Err(Error::InconsistentCrossings("crossing instants must strictly increase".into()));
            }
            if w[1].direction == w[0].direction {
                return Err(Error::InconsistentCrossings("crossing directions must alternate".into()));
            }
        }
        Ok(Self { period, crossings })
    }

    pub fn empty(period: f64) -> Self {
        Self { period, crossings: Vec::new() }
    }

    /// Builds a set from increasing instants spanning less than one period,
    /// possibly starting anywhere; instants are wrapped into `[0, T)` and
    /// rotated into order.
    pub fn from_cyclic(period: f64, times: &[f64], first: Direction) -> Result<Self> {
        let mut dir = first;
        let mut cs: Vec<Crossing> = times
            .iter()
            .map(|&t| {
                let mut tw = t.rem_euclid(period);
                if tw >= period {
                    tw = 0.0;
                }
                let c = Crossing { time: tw, direction: dir };
                dir = dir.flipped();
                c
            })
            .collect();
        cs.sort_by(|a, b| a.time.total_cmp(&b.time));
        Self::new(period, cs)
    }

    /// Two crossings: rising at `t1`, falling half a period later.
    pub fn half_wave(period: f64, t1: f64) -> Result<Self> {
        Self::from_cyclic(period, &[t1, t1 + 0.5 * period], Direction::Rising)
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn times(&self) -> Vec<f64> {
        self.crossings.iter().map(|c| c.time).collect()
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    /// First rising crossing, if any.
    pub fn first_rising(&self) -> Option<f64> {
        self.crossings.iter().find(|c| c.direction == Direction::Rising).map(|c| c.time)
    }

    /// Whether shifting by `T/2` maps the set onto itself with flipped
    /// directions, within `tol` seconds.
    pub fn is_half_wave_symmetric(&self, tol: f64) -> bool {
        let n = self.crossings.len();
        if n == 0 || !n.is_multiple_of(2) {
            return n == 0;
        }
        let half = self.period / 2.0;
        self.crossings.iter().all(|c| {
            let target = (c.time + half).rem_euclid(self.period);
            self.crossings.iter().any(|d| {
                let dt = (d.time - target).rem_euclid(self.period);
                dt.min(self.period - dt) <= tol && d.direction == c.direction.flipped()
            })
        })
    }
}

/// Locates sign changes of a periodic sequence of samples.
///
/// Returns brackets `(lo, hi, direction)` where `lo < hi` are sample times
/// (`hi` may exceed `T` for the wrap bracket), or an exact time when the
/// crossing sits on a run of exactly-zero samples.
enum Bracket {
    Between(usize, Direction),
    Exact(f64, Direction),
}

fn bracket_signs(samples: &[f64], h: f64) -> Result<Vec<Bracket>> {
    let n = samples.len();
    let nonzero: Vec<usize> = (0..n).filter(|&j| samples[j] != 0.0).collect();
    if nonzero.is_empty() {
        return Err(Error::DegenerateInput("waveform is identically zero".into()));
    }
    let mut out = Vec::new();
    for (k, &j) in nonzero.iter().enumerate() {
        let next = nonzero[(k + 1) % nonzero.len()];
        let (sj, sn) = (samples[j], samples[next]);
        if sj.signum() == sn.signum() {
            continue;
        }
        let dir = if sn > 0.0 { Direction::Rising } else { Direction::Falling };
        let gap = (next + n - j) % n;
        if gap == 1 {
            out.push(Bracket::Between(j, dir));
        } else {
            // run of exact zeros between j and next: take its midpoint
            let mid = j as f64 + gap as f64 / 2.0;
            out.push(Bracket::Exact(mid * h, dir));
        }
    }
    Ok(out)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn assemble(period: f64, mut found: Vec<Crossing>) -> Result<ZeroCrossingSet> {
    for c in &mut found {
        c.time = c.time.rem_euclid(period);
        if c.time >= period {
            c.time = 0.0;
        }
    }
    found.sort_by(|a, b| a.time.total_cmp(&b.time));
    if !found.len().is_multiple_of(2) {
        return Err(Error::InconsistentCrossings(format!(
            "odd raw crossing count {} after period closure",
            found.len()
        )));
    }
    ZeroCrossingSet::new(period, found)
}

/// Crossings of a sampled waveform, refined by bisection on a local cubic
/// interpolant through the four samples around each sign change.
pub fn detect_zerocrossings(w: &PeriodicWaveform, refine_tol: f64) -> Result<ZeroCrossingSet> {
    let n = w.len();
    let h = w.step();
    let x = w.samples();
    let brackets = bracket_signs(x, h)?;
    let found = brackets
        .into_iter()
        .map(|b| match b {
            Bracket::Exact(t, direction) => Crossing { time: t, direction },
            Bracket::Between(j, direction) => {
                let p = [x[(j + n - 1) % n], x[j], x[(j + 1) % n], x[(j + 2) % n]];
                // Lagrange cubic on nodes -1, 0, 1, 2 in units of h
                let cubic = |s: f64| {
                    -p[0] * s * (s - 1.0) * (s - 2.0) / 6.0 + p[1] * (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0
                        - p[2] * (s + 1.0) * s * (s - 2.0) / 2.0
                        + p[3] * (s + 1.0) * s * (s - 1.0) / 6.0
                };
                let s = bisect(cubic, 0.0, 1.0, (refine_tol / h).max(1e-15));
                Crossing { time: (j as f64 + s) * h, direction }
            }
        })
        .collect();
    assemble(w.period(), found)
}

/// Crossings of a continuous-time periodic function: sign changes are
/// bracketed on an `n`-point grid and refined by bisection on `f` itself.
pub fn locate_crossings<F: Fn(f64) -> f64>(f: F, period: f64, n: usize, refine_tol: f64) -> Result<ZeroCrossingSet> {
    let h = period / n as f64;
    let samples: Vec<f64> = (0..n).map(|j| f(j as f64 * h)).collect();
    let brackets = bracket_signs(&samples, h)?;
    let found = brackets
        .into_iter()
        .map(|b| match b {
            Bracket::Exact(t, direction) => Crossing { time: t, direction },
            Bracket::Between(j, direction) => {
                let t = bisect(&f, j as f64 * h, (j + 1) as f64 * h, refine_tol);
                Crossing { time: t, direction }
            }
        })
        .collect();
    assemble(period, found)
}

/// Linear ballast one-port in series with the singular element.
#[derive(Debug, Clone, PartialEq)]
pub enum BallastDescriptor {
    /// Series R-L-C; `c = None` means no capacitor (a short).
    Series { r: f64, l: f64, c: Option<f64> },
    /// Rational admittance `Y(s) = Σ num_k s^k / Σ den_k s^k` (ascending powers).
    Rational { num: Vec<f64>, den: Vec<f64> },
}

fn trim_poly(p: &[f64]) -> &[f64] {
    let mut end = p.len();
    while end > 0 && p[end - 1] == 0.0 {
        end -= 1;
    }
    &p[..end]
}

fn poly_eval(p: &[f64], s: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
}

impl BallastDescriptor {
    pub fn series(r: f64, l: f64, c: Option<f64>) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::InvalidInput(format!("series R must be >= 0, got {r}")));
        }
        if !(l.is_finite() && l >= 0.0) {
            return Err(Error::InvalidInput(format!("series L must be >= 0, got {l}")));
        }
        if let Some(c) = c {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidInput(format!("series C must be > 0, got {c}")));
            }
        }
        if r == 0.0 && l == 0.0 && c.is_none() {
            return Err(Error::InvalidInput("series ballast must have at least one element".into()));
        }
        Ok(Self::Series { r, l, c })
    }

    pub fn rational(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        if num.iter().chain(&den).any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite admittance coefficient".into()));
        }
        if trim_poly(&num).is_empty() || trim_poly(&den).is_empty() {
            return Err(Error::InvalidInput("admittance numerator and denominator must be nonzero".into()));
        }
        Ok(Self::Rational { num, den })
    }

    /// `Y(s)`; may be infinite at a series resonance or at DC for a pure R-L.
    pub fn admittance(&self, s: Complex64) -> Complex64 {
        match self {
            Self::Series { r, l, c } => {
                let mut z = Complex64::new(*r, 0.0) + s * *l;
                if let Some(c) = c {
                    z += (s * *c).inv();
                }
                z.inv()
            }
            Self::Rational { num, den } => poly_eval(num, s) / poly_eval(den, s),
        }
    }

    /// `Y(j n ω)`.
    pub fn at_harmonic(&self, n: usize, omega: f64) -> Complex64 {
        self.admittance(Complex64::new(0.0, n as f64 * omega))
    }

    /// `Y(j n ω)`, rejecting harmonics where the series impedance (or the
    /// admittance denominator) cancels to rounding level.
    pub fn checked_at_harmonic(&self, n: usize, omega: f64) -> Result<Complex64> {
        let s = Complex64::new(0.0, n as f64 * omega);
        let (value, size) = match self {
            Self::Series { r, l, c } => {
                let mut size = r + s.im * l;
                let mut z = Complex64::new(*r, 0.0) + s * *l;
                if let Some(c) = c {
                    z += (s * *c).inv();
                    size += 1.0 / (s.im * c);
                }
                (z, size)
            }
            Self::Rational { den, .. } => {
                let size = den.iter().rev().fold(0.0, |acc, &c| acc * s.im + c.abs());
                (poly_eval(den, s), size)
            }
        };
        if value.norm() <= 1e-12 * size {
            return Err(Error::Resonance(n));
        }
        let y = self.admittance(s);
        if !(y.re.is_finite() && y.im.is_finite()) {
            return Err(Error::Resonance(n));
        }
        Ok(y)
    }

    /// `Y(0)`, or `None` when the ballast passes DC without limit.
    pub fn dc_admittance(&self) -> Option<f64> {
        match self {
            Self::Series { r, c, .. } => {
                if c.is_some() {
                    Some(0.0)
                } else if *r > 0.0 {
                    Some(1.0 / r)
                } else {
                    None
                }
            }
            Self::Rational { num, den } => {
                let (n0, d0) = (num.first().copied().unwrap_or(0.0), den.first().copied().unwrap_or(0.0));
                if d0 == 0.0 {
                    if n0 == 0.0 {
                        // cancel common factor s: compare next coefficients
                        let n1 = num.get(1).copied().unwrap_or(0.0);
                        let d1 = den.get(1).copied().unwrap_or(0.0);
                        if d1 == 0.0 {
                            None
                        } else {
                            Some(n1 / d1)
                        }
                    } else {
                        None
                    }
                } else {
                    Some(n0 / d0)
                }
            }
        }
    }

    /// Series R, L, C when the ballast has a state-space form usable by the
    /// time-domain oracle (L > 0 required).
    pub fn series_rlc(&self) -> Option<(f64, f64, Option<f64>)> {
        match self {
            Self::Series { r, l, c } if *l > 0.0 => Some((*r, *l, *c)),
            _ => None,
        }
    }
}

/// `L = 1 / lim_{n→∞} nω|Y(jnω)|`.
pub fn asymptotic_inductance(b: &BallastDescriptor, omega: f64) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidInput(format!("omega must be positive, got {omega}")));
    }
    match b {
        BallastDescriptor::Series { l, .. } => {
            if *l > 0.0 {
                Ok(*l)
            } else {
                Err(Error::NoAsymptoticInductance("series ballast has no inductor; nω|Y| diverges".into()))
            }
        }
        BallastDescriptor::Rational { num, den } => {
            let (num, den) = (trim_poly(num), trim_poly(den));
            let rel = den.len() as isize - num.len() as isize;
            if rel != 1 {
                return Err(Error::NoAsymptoticInductance(format!(
                    "relative degree of Y is {rel}, need 1"
                )));
            }
            let y1 = b.at_harmonic(1, omega);
            if !(y1.re.is_finite() && y1.im.is_finite()) {
                return Err(Error::NoAsymptoticInductance("Y(jω) is not finite".into()));
            }
            Ok((den[den.len() - 1] / num[num.len() - 1]).abs())
        }
    }
}
