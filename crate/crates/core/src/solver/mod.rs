//! Periodic steady states of "linear ballast + singular element" circuits.
//!
//! The current is written as a known function of its own crossing instants,
//! `i = F(t, {t_k})`, and the crossing conditions `F(t_p, {t_k}) = 0` are
//! solved for `{t_k}`. Per harmonic the ballast gives
//! `I_n = Y_eff(jnω) (V_n − A₁ Q_n)`, where `Q_n` is the exact spectrum of the
//! unit square wave `sign[i]`. The slowly converging part of that sum is
//! summed in closed form: the response of the asymptotic inductance `L` to the
//! square wave is the piecewise-linear ramp with slope `∓A₁/L`, and only the
//! remainder (decaying at least as `1/n³`) is summed numerically.

mod affine;
mod decompose;
mod harmonic;
mod multi;
mod oracle;
mod response;
mod sweep;

use std::f64::consts::PI;

pub use affine::{affine_superposition_check, frozen_singular_term, AffineReport};
pub use decompose::{current_quantum, quantize, smooth_rough_decompose};
pub use harmonic::steady_state_two_crossing;
pub use multi::multi_crossing_solver;
pub use oracle::{time_domain_oracle, OracleSettings};
pub use response::ExactCurrent;
pub use sweep::{power_scaling_sweep, power_scaling_sweep_with, SweepRow};

use crate::elements::{HysteresisLamp, SignHardlimiter};
use crate::error::{Error, Result};
use crate::signal::{
    synthesize, to_fourier, FourierSeries, PeriodicWaveform, Unit, ZeroCrossingSet, DEFAULT_GRID,
};
use crate::signal::BallastDescriptor;

/// Default harmonic truncation.
pub const DEFAULT_HARMONICS: usize = 999;

/// The singular element of a lamp circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LampElement {
    /// Element removed (`A = 0`): the circuit is linear.
    Short,
    Sign(SignHardlimiter),
    Lamp(HysteresisLamp),
}

impl LampElement {
    /// Coefficient of `sign[i]` in the element law.
    pub fn a1(&self) -> f64 {
        match self {
            LampElement::Short => 0.0,
            LampElement::Sign(e) => e.a(),
            LampElement::Lamp(e) => e.a1(),
        }
    }

    /// Series inductance `L′` of the element law.
    pub fn l_prime(&self) -> f64 {
        match self {
            LampElement::Lamp(e) => e.l_prime(),
            _ => 0.0,
        }
    }

    /// Element voltage for a given current and its slope.
    pub fn voltage(&self, i: f64, didt: f64) -> f64 {
        self.a1() * crate::elements::sign(i) + self.l_prime() * didt
    }
}

/// Ballast `B` in series with the element, driven by `v_in = U ξ(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LampCircuit {
    pub ballast: BallastDescriptor,
    pub element: LampElement,
    pub u: f64,
    /// Normalized drive waveform `ξ`; its `omega` is the working frequency.
    pub xi: FourierSeries,
}

impl LampCircuit {
    pub fn new(ballast: BallastDescriptor, element: LampElement, u: f64, xi: FourierSeries) -> Result<Self> {
        if !(u.is_finite() && u > 0.0) {
            return Err(Error::InvalidInput(format!("drive scale U must be positive, got {u}")));
        }
        let peak: f64 = (1..=xi.n_h()).map(|n| xi.magnitude(n)).sum();
        if peak == 0.0 {
            return Err(Error::InvalidInput("drive waveform is identically zero".into()));
        }
        if xi.a[0].abs() > 1e-12 * peak {
            return Err(Error::InvalidInput(format!("drive waveform must have zero mean, got {}", xi.a[0])));
        }
        Ok(Self { ballast, element, u, xi })
    }

    /// `v_in = U sin(ωt)`.
    pub fn sine_driven(ballast: BallastDescriptor, element: LampElement, u: f64, omega: f64) -> Result<Self> {
        Self::new(ballast, element, u, FourierSeries::sine(omega))
    }

    /// Drive taken from a sampled waveform, projected onto `n_h` harmonics.
    pub fn sampled_drive(
        ballast: BallastDescriptor,
        element: LampElement,
        u: f64,
        xi: &PeriodicWaveform,
        n_h: usize,
    ) -> Result<Self> {
        let mut s = to_fourier(xi, n_h)?;
        s.a[0] = 0.0;
        Self::new(ballast, element, u, s)
    }

    pub fn omega(&self) -> f64 {
        self.xi.omega
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.xi.omega
    }

    pub fn with_u(&self, u: f64) -> Result<Self> {
        Self::new(self.ballast.clone(), self.element, u, self.xi.clone())
    }

    /// `v_in(t)`.
    pub fn source(&self, t: f64) -> f64 {
        self.u * self.xi.eval(t)
    }

    /// Whether `ξ(t + T/2) = −ξ(t)` (no even harmonics).
    pub fn is_half_wave_symmetric(&self) -> bool {
        let peak: f64 = (1..=self.xi.n_h()).map(|n| self.xi.magnitude(n)).sum();
        (0..=self.xi.n_h()).step_by(2).all(|n| self.xi.magnitude(n) <= 1e-12 * peak)
    }
}

/// Numerical settings shared by the steady-state solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Harmonic truncation `N_h`.
    pub n_h: usize,
    /// Output samples per period.
    pub grid: usize,
    /// Residual tolerance on `|i(t_k)|`, relative to `max |i|`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self { n_h: DEFAULT_HARMONICS, grid: DEFAULT_GRID, tol: 1e-10, max_iter: 50 }
    }
}

/// A periodic steady state sampled over one period.
#[derive(Debug, Clone)]
pub struct SteadyState {
    pub current: PeriodicWaveform,
    /// Element voltage.
    pub voltage: PeriodicWaveform,
    /// Source voltage `v_in`.
    pub source: PeriodicWaveform,
    pub crossings: ZeroCrossingSet,
    pub iterations: usize,
    /// `max |i(t_k)| / max |i|` at the reported crossings.
    pub residual: f64,
    /// Continuous-time representation when produced by a harmonic solver.
    pub exact: Option<ExactCurrent>,
}

impl SteadyState {
    pub fn period(&self) -> f64 {
        self.current.period()
    }

    /// Rising crossing used as the phase parameter `t₁`.
    pub fn t1(&self) -> Option<f64> {
        self.crossings.first_rising()
    }
}

pub(crate) fn source_waveform(c: &LampCircuit, n: usize) -> Result<PeriodicWaveform> {
    synthesize(&c.xi.scaled(c.u), n, Unit::Volt)
}
