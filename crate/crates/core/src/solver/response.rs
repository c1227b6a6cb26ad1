use num_complex::Complex64;

use super::{source_waveform, LampCircuit, SteadyState};
use crate::elements::sign;
use crate::error::{Error, Result};
use crate::fourier::SquareWave;
use crate::signal::{
    asymptotic_inductance, synthesize, Direction, FourierSeries, PeriodicWaveform, Unit, ZeroCrossingSet,
};

/// Per-harmonic data of a circuit that does not depend on the crossings.
#[derive(Debug, Clone)]
pub(crate) struct Harmonics {
    pub omega: f64,
    pub period: f64,
    pub a1: f64,
    pub l_prime: f64,
    /// `Y_eff(jnω)`, `n = 0..=n_h`, with the element's `L′` in series.
    pub y_eff: Vec<Complex64>,
    /// `U ξ_n`.
    pub v_in: Vec<Complex64>,
    /// Asymptotic inductance seen by the square-wave term (`L + L′`).
    pub l_total: Option<f64>,
    /// DC admittance is unbounded (no series R or C).
    pub dc_open: bool,
}

impl Harmonics {
    pub fn new(c: &LampCircuit, n_h: usize) -> Result<Self> {
        let omega = c.omega();
        let a1 = c.element.a1();
        let l_prime = c.element.l_prime();
        let l_total = match asymptotic_inductance(&c.ballast, omega) {
            Ok(l) => Some(l + l_prime),
            Err(e) => {
                if a1 != 0.0 {
                    return Err(e);
                }
                None
            }
        };
        let mut y_eff = Vec::with_capacity(n_h + 1);
        let dc = c.ballast.dc_admittance();
        y_eff.push(Complex64::new(dc.unwrap_or(0.0), 0.0));
        for n in 1..=n_h {
            let y = c.ballast.checked_at_harmonic(n, omega)?;
            let ye = y / (Complex64::new(1.0, 0.0) + Complex64::new(0.0, n as f64 * omega * l_prime) * y);
            if !(ye.re.is_finite() && ye.im.is_finite()) {
                return Err(Error::Resonance(n));
            }
            y_eff.push(ye);
        }
        let v_in = (0..=n_h).map(|n| c.xi.phasor(n) * c.u).collect();
        Ok(Self { omega, period: c.period(), a1, l_prime, y_eff, v_in, l_total, dc_open: dc.is_none() })
    }

    pub fn n_h(&self) -> usize {
        self.y_eff.len() - 1
    }

    /// Current as a function of the switching instants of `sign[i]`.
    pub fn response(&self, times: &[f64], first: Direction) -> Result<ExactCurrent> {
        let square = SquareWave::new(self.period, times, first)?;
        let q = square.series(1.0, self.n_h());
        let rough_gain = match self.l_total {
            Some(l) if self.a1 != 0.0 => -self.a1 / l,
            _ => 0.0,
        };
        let mut smooth = Vec::with_capacity(self.n_h() + 1);
        let dc_forcing = self.v_in[0].re - self.a1 * q.a[0];
        smooth.push(Complex64::new(if self.dc_open { 0.0 } else { self.y_eff[0].re * dc_forcing }, 0.0));
        for n in 1..=self.n_h() {
            let qn = q.phasor(n);
            let full = self.y_eff[n] * (self.v_in[n] - qn * self.a1);
            let rough = if rough_gain != 0.0 {
                qn * rough_gain / Complex64::new(0.0, n as f64 * self.omega)
            } else {
                Complex64::new(0.0, 0.0)
            };
            smooth.push(full - rough);
        }
        Ok(ExactCurrent {
            smooth: FourierSeries::from_phasors(self.omega, &smooth),
            rough_gain,
            square,
            dc_imbalance: if self.dc_open { dc_forcing } else { 0.0 },
        })
    }
}

/// Continuous-time steady-state current: a rapidly converging trigonometric
/// sum plus the closed-form ramp response of the asymptotic inductance to
/// the square wave.
#[derive(Debug, Clone)]
pub struct ExactCurrent {
    pub smooth: FourierSeries,
    /// Slope factor of the ramp part, `−A₁ / L`.
    pub rough_gain: f64,
    pub square: SquareWave,
    /// DC forcing left unbalanced when the ballast passes DC without limit.
    pub dc_imbalance: f64,
}

impl ExactCurrent {
    pub fn eval(&self, t: f64) -> f64 {
        let s = &self.smooth;
        let mut acc = s.a[0];
        let (s1, c1) = (s.omega * t).sin_cos();
        let step = Complex64::new(c1, s1);
        let mut rot = step;
        for n in 1..=s.n_h() {
            if n % 64 == 0 {
                let (sn, cn) = (n as f64 * s.omega * t).sin_cos();
                rot = Complex64::new(cn, sn);
            }
            acc += s.a[n] * rot.re + s.b[n] * rot.im;
            rot *= step;
        }
        acc + self.rough_gain * self.square.ramp(t)
    }

    /// Samples current and its time derivative on an `n`-point grid.
    pub fn sample(&self, n: usize) -> Result<(PeriodicWaveform, PeriodicWaveform)> {
        let smooth = synthesize(&self.smooth, n, Unit::Ampere)?;
        let mut deriv = FourierSeries::zero(self.smooth.omega, self.smooth.n_h());
        for k in 1..=self.smooth.n_h() {
            let w = k as f64 * self.smooth.omega;
            deriv.a[k] = w * self.smooth.b[k];
            deriv.b[k] = -w * self.smooth.a[k];
        }
        let dsmooth = synthesize(&deriv, n, Unit::Ampere)?;
        let period = smooth.period();
        let h = period / n as f64;
        let mean = self.square.mean();
        let i: Vec<f64> = smooth
            .samples()
            .iter()
            .enumerate()
            .map(|(j, x)| x + self.rough_gain * self.square.ramp(j as f64 * h))
            .collect();
        let di: Vec<f64> = dsmooth
            .samples()
            .iter()
            .enumerate()
            .map(|(j, x)| x + self.rough_gain * (self.square.value(j as f64 * h) - mean))
            .collect();
        Ok((PeriodicWaveform::new(period, i, Unit::Ampere)?, PeriodicWaveform::new(period, di, Unit::Ampere)?))
    }

    /// Peak magnitude on a coarse grid.
    pub fn scale(&self) -> f64 {
        let period = self.square.period();
        let m = 256;
        (0..m).map(|j| self.eval(j as f64 * period / m as f64).abs()).fold(0.0, f64::max)
    }
}

/// Assembles a [`SteadyState`] from a converged response.
pub(crate) fn build_state(
    c: &LampCircuit,
    h: &Harmonics,
    exact: ExactCurrent,
    crossings: ZeroCrossingSet,
    grid: usize,
    iterations: usize,
) -> Result<SteadyState> {
    let (current, didt) = exact.sample(grid)?;
    let v: Vec<f64> = current
        .samples()
        .iter()
        .zip(didt.samples())
        .map(|(&i, &d)| h.a1 * sign(i) + h.l_prime * d)
        .collect();
    let voltage = PeriodicWaveform::new(current.period(), v, Unit::Volt)?;
    let scale = current.max_abs();
    let residual = if scale > 0.0 {
        crossings.times().iter().map(|&t| exact.eval(t).abs()).fold(0.0, f64::max) / scale
    } else {
        0.0
    };
    Ok(SteadyState {
        source: source_waveform(c, grid)?,
        current,
        voltage,
        crossings,
        iterations,
        residual,
        exact: Some(exact),
    })
}
