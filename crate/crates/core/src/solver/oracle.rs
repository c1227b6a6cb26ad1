use super::{source_waveform, LampCircuit, SteadyState};
use crate::elements::sign;
use crate::error::{Error, Result};
use crate::signal::{Crossing, Direction, PeriodicWaveform, Unit, ZeroCrossingSet, DEFAULT_GRID};

/// Settings of [`time_domain_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    /// Integration steps (and output samples) per period.
    pub grid: usize,
    /// Initial current and capacitor charge.
    pub x0: [f64; 2],
    /// Period-to-period L∞ difference, relative to `max |i|`.
    pub tol_ss: f64,
    pub max_periods: usize,
    /// Event localization tolerance as a fraction of the period.
    pub event_tol: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self { grid: DEFAULT_GRID, x0: [0.0, 0.0], tol_ss: 1e-9, max_periods: 2000, event_tol: 1e-13 }
    }
}

struct Ode<'a> {
    c: &'a LampCircuit,
    r: f64,
    l: f64,
    inv_c: f64,
    a1: f64,
}

impl Ode<'_> {
    fn forcing(&self, t: f64, q: f64) -> f64 {
        self.c.source(t) - q * self.inv_c
    }

    /// Right-hand side in conduction mode `s = ±1`, or frozen for `s = 0`.
    fn rhs(&self, t: f64, x: [f64; 2], s: f64) -> [f64; 2] {
        if s == 0.0 {
            return [0.0, 0.0];
        }
        [(self.forcing(t, x[1]) - self.r * x[0] - self.a1 * s) / self.l, x[0]]
    }

    fn rk4(&self, t: f64, x: [f64; 2], h: f64, s: f64) -> [f64; 2] {
        let add = |x: [f64; 2], k: [f64; 2], f: f64| [x[0] + f * k[0], x[1] + f * k[1]];
        let k1 = self.rhs(t, x, s);
        let k2 = self.rhs(t + 0.5 * h, add(x, k1, 0.5 * h), s);
        let k3 = self.rhs(t + 0.5 * h, add(x, k2, 0.5 * h), s);
        let k4 = self.rhs(t + h, add(x, k3, h), s);
        [
            x[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            x[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ]
    }

    /// Mode entered at a point where `i = 0`, coming from mode `from`.
    fn mode_at_zero(&self, t: f64, q: f64, from: f64) -> f64 {
        let f = self.forcing(t, q);
        if f * -from > self.a1 || (from == 0.0 && f.abs() > self.a1) {
            sign(f)
        } else if f.abs() <= self.a1 {
            0.0
        } else {
            from
        }
    }
}

/// Event observed during integration: a mode change at time `t`.
#[derive(Debug, Clone, Copy)]
struct Event {
    t: f64,
    from: f64,
    to: f64,
}

/// Brute-force steady state by fixed-step RK4 integration of
/// `L di/dt + R i + q/C + A₁ sign[i] = v_in(t)` with event localization.
///
/// Steps are split at each sign change of `i`, found by bisection on the step
/// length. While `|v_in − q/C| ≤ A₁` at zero current the current stays at
/// zero. Integration stops once consecutive periods agree to `tol_ss`; the
/// last period is returned.
pub fn time_domain_oracle(c: &LampCircuit, o: &OracleSettings) -> Result<SteadyState> {
    let (r, l, cap) = c.ballast.series_rlc().ok_or_else(|| {
        Error::InvalidInput("time-domain oracle needs a series R-L(-C) ballast".into())
    })?;
    let ode = Ode { c, r, l: l + c.element.l_prime(), inv_c: cap.map_or(0.0, |c| 1.0 / c), a1: c.element.a1() };
    let n = o.grid;
    if n < crate::signal::MIN_GRID {
        return Err(Error::InvalidInput(format!("grid must have at least {} points", crate::signal::MIN_GRID)));
    }
    let period = c.period();
    let h = period / n as f64;
    let ev_tol = o.event_tol * period;

    let mut x = o.x0;
    let mut mode = if x[0] != 0.0 { sign(x[0]) } else { ode.mode_at_zero(0.0, x[1], 0.0) };
    let mut events: Vec<Event> = Vec::new();
    let mut prev: Option<Vec<f64>> = None;
    let mut last_diff = f64::INFINITY;

    for p in 0..o.max_periods {
        let t0 = p as f64 * period;
        let mut samples = Vec::with_capacity(n);
        let mut states = Vec::with_capacity(n);
        events.retain(|e| e.t >= t0 - period);
        for j in 0..n {
            let ts = t0 + j as f64 * h;
            let te = t0 + (j + 1) as f64 * h;
            samples.push(x[0]);
            states.push((x, mode));
            let mut t = ts;
            let mut guard = 0;
            while t < te {
                guard += 1;
                if guard > 64 {
                    return Err(Error::StepTooLarge(format!("more than 64 events inside one step near t = {ts}")));
                }
                let dt = te - t;
                let full = ode.rk4(t, x, dt, mode);
                let crossed = |y: [f64; 2], tt: f64| -> bool {
                    if mode == 0.0 {
                        ode.forcing(tt, y[1]).abs() > ode.a1
                    } else {
                        y[0] * mode <= 0.0
                    }
                };
                if !crossed(full, te) {
                    x = full;
                    t = te;
                    continue;
                }
                let (mut lo, mut hi) = (0.0, dt);
                while hi - lo > ev_tol {
                    let mid = 0.5 * (lo + hi);
                    if crossed(ode.rk4(t, x, mid, mode), t + mid) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let mut y = ode.rk4(t, x, hi, mode);
                let tev = t + hi;
                if mode != 0.0 {
                    y[0] = 0.0;
                }
                let next = ode.mode_at_zero(tev, y[1], mode);
                if next != mode {
                    events.push(Event { t: tev, from: mode, to: next });
                }
                mode = next;
                x = y;
                t = tev;
            }
        }
        let scale = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if let Some(prev) = &prev {
            let diff = prev.iter().zip(&samples).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            last_diff = if scale > 0.0 { diff / scale } else { diff };
            if last_diff < o.tol_ss {
                return finish(c, &ode, t0, period, samples, states, &events, p + 1, last_diff);
            }
        }
        prev = Some(samples);
    }
    Err(Error::NotSettled { periods: o.max_periods, difference: last_diff })
}

#[allow(clippy::too_many_arguments)]
fn finish(
    c: &LampCircuit,
    ode: &Ode,
    t0: f64,
    period: f64,
    samples: Vec<f64>,
    states: Vec<([f64; 2], f64)>,
    events: &[Event],
    periods: usize,
    residual: f64,
) -> Result<SteadyState> {
    let n = samples.len();
    let h = period / n as f64;
    let didt: Vec<f64> = states
        .iter()
        .enumerate()
        .map(|(j, (x, s))| ode.rhs(t0 + j as f64 * h, *x, *s)[0])
        .collect();
    let lp = c.element.l_prime();
    let volts: Vec<f64> = samples.iter().zip(&didt).map(|(&i, &d)| ode.a1 * sign(i) + lp * d).collect();

    // Sign changes of i over the last period; a stay at zero between
    // opposite conduction modes counts as one crossing at its midpoint.
    let mut found = Vec::new();
    let mut pending: Option<&Event> = None;
    for e in events {
        if e.to == 0.0 {
            pending = Some(e);
            continue;
        }
        let (time, from) = match pending.take() {
            Some(enter) if e.from == 0.0 => (0.5 * (enter.t + e.t), enter.from),
            _ => (e.t, e.from),
        };
        if from == -e.to && time >= t0 && time < t0 + period {
            let direction = if e.to > 0.0 { Direction::Rising } else { Direction::Falling };
            found.push(Crossing { time: (time - t0).clamp(0.0, period * (1.0 - f64::EPSILON)), direction });
        }
    }
    found.sort_by(|a, b| a.time.total_cmp(&b.time));
    let crossings = ZeroCrossingSet::new(period, found)?;

    Ok(SteadyState {
        current: PeriodicWaveform::new(period, samples, Unit::Ampere)?,
        voltage: PeriodicWaveform::new(period, volts, Unit::Volt)?,
        source: source_waveform(c, n)?,
        crossings,
        iterations: periods,
        residual,
        exact: None,
    })
}
