use super::SteadyState;
use crate::error::{Error, Result};
use crate::fourier::SquareWave;
use crate::signal::PeriodicWaveform;

/// Splits a steady-state current into `i₁ + i₂`, where `i₂` is the exact
/// zero-mean ramp with slope `−(A_eff/L) sign[i]` set by the crossings and
/// `i₁ = i − i₂` is the smoother remainder.
///
/// `i₂` is rounded to multiples of [`current_quantum`], so when the current
/// samples are themselves on that grid (see [`quantize`]) the parts add back
/// to `i` bit for bit; otherwise they agree to one rounding of `max |i|`.
pub fn smooth_rough_decompose(
    s: &SteadyState,
    a_eff: f64,
    l: f64,
) -> Result<(PeriodicWaveform, PeriodicWaveform)> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::InvalidInput(format!("inductance must be positive, got {l}")));
    }
    let i = &s.current;
    let unit = i.unit();
    if a_eff == 0.0 {
        let zeros = vec![0.0; i.len()];
        return Ok((i.clone(), PeriodicWaveform::new(i.period(), zeros, unit)?));
    }
    let square = SquareWave::from_set(&s.crossings);
    let gain = -a_eff / l;
    let ramp: Vec<f64> = i.times().map(|t| gain * square.ramp(t)).collect();
    let scale = ramp.iter().fold(i.max_abs(), |m, r| m.max(r.abs()));
    let q = current_quantum(scale);
    let mut i1 = Vec::with_capacity(i.len());
    let mut i2 = Vec::with_capacity(i.len());
    for (&x, &r) in i.samples().iter().zip(&ramp) {
        let b = if q > 0.0 { (r / q).round() * q } else { r };
        i1.push(x - b);
        i2.push(b);
    }
    Ok((PeriodicWaveform::new(i.period(), i1, unit)?, PeriodicWaveform::new(i.period(), i2, unit)?))
}

/// Fixed-point resolution for waveforms of magnitude up to `scale`: the
/// spacing of doubles near `4 · scale`.
pub fn current_quantum(scale: f64) -> f64 {
    if scale == 0.0 || !scale.is_finite() {
        return 0.0;
    }
    let top = 4.0 * scale;
    top.next_up() - top
}

/// Rounds samples to multiples of `current_quantum(max |x|)`; the change is
/// at most a few ulps of the peak value.
pub fn quantize(w: &PeriodicWaveform) -> PeriodicWaveform {
    let q = current_quantum(w.max_abs());
    if q == 0.0 {
        return w.clone();
    }
    w.map(w.unit(), |x| (x / q).round() * q)
}
