use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::SquareWave;
use crate::signal::{synthesize, to_fourier, BallastDescriptor, Direction, FourierSeries, PeriodicWaveform, Unit};

/// Outcome of [`affine_superposition_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineReport {
    /// `‖(i(U₁) − i(U₂))/(U₁ − U₂) − L̂⁻¹ξ‖∞`.
    pub deviation: f64,
    /// `‖i(2U₁) − 2 i(U₁)‖∞`.
    pub scaling_defect: f64,
    /// `‖L̂⁻¹f‖∞`.
    pub forced_norm: f64,
}

/// `−A₁ σ(t)` for a two-crossing square wave rising at `t1`.
pub fn frozen_singular_term(a1: f64, t1: f64, period: f64, n: usize) -> Result<PeriodicWaveform> {
    let sq = SquareWave::new(period, &[t1, t1 + 0.5 * period], Direction::Rising)?;
    PeriodicWaveform::from_fn(period, n, Unit::Volt, |t| -a1 * sq.value(t))
}

fn apply_admittance(b: &BallastDescriptor, v: &FourierSeries) -> Result<FourierSeries> {
    let mut out = Vec::with_capacity(v.n_h() + 1);
    let v0 = v.a[0];
    match b.dc_admittance() {
        Some(y0) => out.push(Complex64::new(y0 * v0, 0.0)),
        None => {
            let peak: f64 = (1..=v.n_h()).map(|n| v.magnitude(n)).sum();
            if v0.abs() > 1e-12 * peak.max(f64::MIN_POSITIVE) {
                return Err(Error::Resonance(0));
            }
            out.push(Complex64::new(0.0, 0.0));
        }
    }
    for n in 1..=v.n_h() {
        let y = b.checked_at_harmonic(n, v.omega)?;
        out.push(y * v.phasor(n));
    }
    Ok(FourierSeries::from_phasors(v.omega, &out))
}

/// Checks the affine structure `i(U) = U L̂⁻¹ξ + L̂⁻¹f` with the singular term
/// `f` frozen: differences of responses superpose while scaling fails by
/// exactly `L̂⁻¹f`.
pub fn affine_superposition_check(
    linear_op: &BallastDescriptor,
    xi: &PeriodicWaveform,
    f_wave: &PeriodicWaveform,
    u1: f64,
    u2: f64,
    n_h: usize,
) -> Result<AffineReport> {
    xi.check_same_grid(f_wave)?;
    if u1 == u2 || !(u1.is_finite() && u2.is_finite()) {
        return Err(Error::InvalidInput("drive scales must be finite and distinct".into()));
    }
    let n = xi.len();
    let rx = synthesize(&apply_admittance(linear_op, &to_fourier(xi, n_h)?)?, n, Unit::Ampere)?;
    let rf = synthesize(&apply_admittance(linear_op, &to_fourier(f_wave, n_h)?)?, n, Unit::Ampere)?;
    let (rx, rf) = (rx.samples(), rf.samples());
    let resp = |u: f64, j: usize| u * rx[j] + rf[j];
    let mut report = AffineReport { deviation: 0.0, scaling_defect: 0.0, forced_norm: 0.0 };
    for j in 0..n {
        let slope = (resp(u1, j) - resp(u2, j)) / (u1 - u2);
        report.deviation = report.deviation.max((slope - rx[j]).abs());
        report.scaling_defect = report.scaling_defect.max((resp(2.0 * u1, j) - 2.0 * resp(u1, j)).abs());
        report.forced_norm = report.forced_norm.max(rf[j].abs());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sine(n: usize) -> PeriodicWaveform {
        PeriodicWaveform::from_fn(0.02, n, Unit::Dimensionless, |t| (2.0 * PI * 50.0 * t).sin()).unwrap()
    }

    #[test]
    fn zero_forcing_is_linear() {
        let b = BallastDescriptor::series(10.0, 0.5, None).unwrap();
        let xi = sine(1024);
        let f = xi.map(Unit::Volt, |_| 0.0);
        let r = affine_superposition_check(&b, &xi, &f, 1.0, 3.0, 255).unwrap();
        assert!(r.deviation < 1e-12);
        assert_eq!(r.forced_norm, 0.0);
        assert_eq!(r.scaling_defect, 0.0);
    }

    #[test]
    fn frozen_term_breaks_scaling() {
        let b = BallastDescriptor::series(10.0, 0.5, None).unwrap();
        let xi = sine(1024);
        let f = frozen_singular_term(2.0, 0.003, 0.02, 1024).unwrap();
        let r = affine_superposition_check(&b, &xi, &f, 1.0, 3.0, 255).unwrap();
        assert!(r.deviation < 1e-12);
        assert!((r.scaling_defect - r.forced_norm).abs() < 1e-12 * r.forced_norm);
        assert!(r.forced_norm > 0.0);
    }

    #[test]
    fn resonance_is_reported() {
        let omega = 2.0 * PI * 50.0;
        let l = 1.0;
        let c = 1.0 / (9.0 * omega * omega * l);
        let b = BallastDescriptor::series(0.0, l, Some(c)).unwrap();
        let xi = sine(1024);
        let f = frozen_singular_term(1.0, 0.001, 0.02, 1024).unwrap();
        let err = affine_superposition_check(&b, &xi, &f, 1.0, 2.0, 255).unwrap_err();
        assert!(matches!(err, Error::Resonance(3)), "{err:?}");
    }
}
