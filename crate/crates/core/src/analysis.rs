//! Hysteresis loops, power, flux–charge trajectories and field balance.

use std::f64::consts::TAU;

use crate::elements::{sign, HysteresisLamp, MemristiveSystem, PowerLawHysteresisElement};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::signal::{PeriodicWaveform, Unit};

/// Loops with `|area| < AREA_EPS · max|i| · max|v|` are degenerate.
pub const AREA_EPS: f64 = 1e-6;
pub const MIN_LOOP_POINTS: usize = 16;
/// Default exclusion band of [`dvdi_range`], relative to `max |i|`.
pub const DVDI_EXCLUSION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopDirection {
    Clockwise,
    Counterclockwise,
    Degenerate,
}

impl LoopDirection {
    pub fn label(self) -> &'static str {
        match self {
            LoopDirection::Clockwise => "clockwise",
            LoopDirection::Counterclockwise => "counterclockwise",
            LoopDirection::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopClass {
    Inductive,
    Capacitive,
    Resistive,
}

impl LoopClass {
    pub fn label(self) -> &'static str {
        match self {
            LoopClass::Inductive => "inductive",
            LoopClass::Capacitive => "capacitive",
            LoopClass::Resistive => "resistive",
        }
    }
}

/// Closed `(i, v)` trajectory over one period.
#[derive(Debug, Clone, PartialEq)]
pub struct HysteresisLoop {
    pub points: Vec<(f64, f64)>,
    /// Shoelace area with `i` as abscissa; negative means clockwise.
    pub signed_area: f64,
    pub direction: LoopDirection,
}

impl HysteresisLoop {
    pub fn from_points(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < MIN_LOOP_POINTS {
            return Err(Error::TooFewPoints(format!("loop needs at least {MIN_LOOP_POINTS} points, got {}", points.len())));
        }
        let n = points.len();
        let area = 0.5
            * (0..n)
                .map(|k| {
                    let (a, b) = (points[k], points[(k + 1) % n]);
                    a.0 * b.1 - b.0 * a.1
                })
                .sum::<f64>();
        let imax = points.iter().fold(0.0f64, |m, p| m.max(p.0.abs()));
        let vmax = points.iter().fold(0.0f64, |m, p| m.max(p.1.abs()));
        let direction = if area.abs() < AREA_EPS * imax * vmax || area == 0.0 {
            LoopDirection::Degenerate
        } else if area < 0.0 {
            LoopDirection::Clockwise
        } else {
            LoopDirection::Counterclockwise
        };
        Ok(Self { points, signed_area: area, direction })
    }

    pub fn area(&self) -> f64 {
        self.signed_area.abs()
    }

    /// The arc with `i ≥ 0`, closed through the origin.
    ///
    /// Odd element laws trace two lobes of opposite orientation whose areas
    /// cancel; the positive-current lobe carries the orientation.
    pub fn positive_lobe(&self) -> Result<HysteresisLoop> {
        let n = self.points.len();
        let start = (0..n)
            .find(|&k| self.points[k].0 >= 0.0 && self.points[(k + n - 1) % n].0 < 0.0)
            .unwrap_or(0);
        let arc: Vec<(f64, f64)> = (0..n)
            .map(|k| self.points[(start + k) % n])
            .take_while(|p| p.0 >= 0.0)
            .collect();
        HysteresisLoop::from_points(arc)
    }
}

pub fn extract_loop(i: &PeriodicWaveform, v: &PeriodicWaveform) -> Result<HysteresisLoop> {
    i.check_same_grid(v)?;
    HysteresisLoop::from_points(i.samples().iter().copied().zip(v.samples().iter().copied()).collect())
}

pub fn classify_loop(l: &HysteresisLoop) -> LoopClass {
    match l.direction {
        LoopDirection::Clockwise => LoopClass::Inductive,
        LoopDirection::Counterclockwise => LoopClass::Capacitive,
        LoopDirection::Degenerate => LoopClass::Resistive,
    }
}

/// Whether `v` vanishes wherever `i` changes sign along the loop.
///
/// At a sampled sign change of `i` the loop counts as pinched when `v` also
/// changes sign between the same two samples, or when `v` linearly
/// interpolated to the zero of `i` is below `tol_v`.
pub fn pinch_test(l: &HysteresisLoop, tol_v: f64) -> bool {
    let p = &l.points;
    let n = p.len();
    (0..n).all(|k| {
        let (a, b) = (p[k], p[(k + 1) % n]);
        if a.0 == 0.0 {
            let prev = p[(k + n - 1) % n];
            return a.1.abs() < tol_v || prev.1 * b.1 <= 0.0;
        }
        if a.0 * b.0 >= 0.0 {
            return true;
        }
        if a.1 * b.1 <= 0.0 {
            return true;
        }
        let s = a.0 / (a.0 - b.0);
        (a.1 + s * (b.1 - a.1)).abs() < tol_v
    })
}

/// Mean of `v·i` over one period (trapezoid rule on the periodic grid).
pub fn average_power(i: &PeriodicWaveform, v: &PeriodicWaveform) -> Result<f64> {
    i.check_same_grid(v)?;
    Ok(i.samples().iter().zip(v.samples()).map(|(a, b)| a * b).sum::<f64>() / i.len() as f64)
}

/// Relative gap between `⟨i (A₁ sign i + L′ di/dt)⟩` and `A₁⟨|i|⟩`, with
/// `di/dt` by periodic central differences.
pub fn lamp_power_identity_residual(i: &PeriodicWaveform, e: &HysteresisLamp) -> Result<f64> {
    let didt = i.derivative();
    let a1 = e.a1();
    let n = i.len() as f64;
    let p: f64 = i
        .samples()
        .iter()
        .zip(didt.samples())
        .map(|(&x, &d)| x * (a1 * sign(x) + e.l_prime() * d))
        .sum::<f64>()
        / n;
    let reference = a1 * i.samples().iter().map(|x| x.abs()).sum::<f64>() / n;
    if reference == 0.0 {
        return Err(Error::DegenerateInput("zero current: identity undefined".into()));
    }
    Ok((p - reference).abs() / reference)
}

/// Unevaluated sum `hi + lo` carried in two doubles.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Self { hi: s, lo: lo - (s - hi) }
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Dd::renorm(p, e + (self.hi * o.lo + self.lo * o.hi))
    }

    fn sub(self, o: Dd) -> Dd {
        let s = self.hi - o.hi;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (-o.hi - bb);
        Dd::renorm(s, err + self.lo - o.lo)
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::new(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::new(q2)));
        let q3 = r.hi / o.hi;
        Dd::renorm(q1, q2).add_f(q3)
    }

    fn add_f(self, x: f64) -> Dd {
        let s = self.hi + x;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (x - bb);
        Dd::renorm(s, err + self.lo)
    }
}

const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

/// Power through the conductor surface `s·E·H` with `E = v/l`,
/// `H = i/(2πr)`, `s = 2πrl`, alongside `v·i`.
///
/// Field quantities are carried in double-double precision so the surface
/// product rounds to the same double as `v·i`.
pub fn poynting_balance(l: f64, r: f64, v: f64, i: f64) -> Result<(f64, f64)> {
    if !(l.is_finite() && l > 0.0 && r.is_finite() && r > 0.0) {
        return Err(Error::InvalidInput(format!("conductor length and radius must be positive, got l={l}, r={r}")));
    }
    let circumference = Dd { hi: TAU, lo: TAU_LO }.mul(Dd::new(r));
    let e = Dd::new(v).div(Dd::new(l));
    let h = Dd::new(i).div(circumference);
    let s = circumference.mul(Dd::new(l));
    let flow = s.mul(e).mul(h);
    Ok((flow.hi + flow.lo, v * i))
}

/// Running flux `ψ = ∫v dt` and charge `q = ∫i dt` from `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxChargeTrajectory {
    pub step: f64,
    pub psi: Vec<f64>,
    pub q: Vec<f64>,
}

/// Cumulative trapezoid integrals over `n_periods` repetitions of the grid.
pub fn flux_charge(i: &PeriodicWaveform, v: &PeriodicWaveform, n_periods: usize) -> Result<FluxChargeTrajectory> {
    i.check_same_grid(v)?;
    if n_periods == 0 {
        return Err(Error::InvalidInput("need at least one period".into()));
    }
    let h = i.step();
    let integrate = |x: &[f64]| {
        let n = x.len();
        let mut out = Vec::with_capacity(n * n_periods);
        let mut acc = 0.0;
        for k in 0..n * n_periods {
            out.push(acc);
            acc += 0.5 * h * (x[k % n] + x[(k + 1) % n]);
        }
        out
    };
    Ok(FluxChargeTrajectory { step: h, psi: integrate(v.samples()), q: integrate(i.samples()) })
}

/// Current, voltage and state of a memristive one-port under an imposed
/// current, integrated by RK4 over one period from the initial state.
#[derive(Debug, Clone)]
pub struct MemristiveRun {
    pub current: PeriodicWaveform,
    pub voltage: PeriodicWaveform,
    pub states: Vec<Vec<f64>>,
}

pub fn memristive_response<M: MemristiveSystem + ?Sized>(
    m: &M,
    current: impl Fn(f64) -> f64,
    period: f64,
    n: usize,
) -> Result<MemristiveRun> {
    use crate::elements::{memristive_state_rate, memristive_voltage};
    let h = period / n as f64;
    let mut x = m.initial_state();
    let (mut is, mut vs, mut states) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let axpy = |x: &[f64], k: &[f64], f: f64| -> Vec<f64> { x.iter().zip(k).map(|(a, b)| a + f * b).collect() };
    for j in 0..n {
        let t = j as f64 * h;
        let i0 = current(t);
        is.push(i0);
        vs.push(memristive_voltage(m, &x, i0)?);
        states.push(x.clone());
        let im = current(t + 0.5 * h);
        let k1 = memristive_state_rate(m, &x, i0)?;
        let k2 = memristive_state_rate(m, &axpy(&x, &k1, 0.5 * h), im)?;
        let k3 = memristive_state_rate(m, &axpy(&x, &k2, 0.5 * h), im)?;
        let k4 = memristive_state_rate(m, &axpy(&x, &k3, h), current(t + h))?;
        x = (0..x.len()).map(|d| x[d] + h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d])).collect();
    }
    Ok(MemristiveRun {
        current: PeriodicWaveform::new(period, is, Unit::Ampere)?,
        voltage: PeriodicWaveform::new(period, vs, Unit::Volt)?,
        states,
    })
}

/// Element probed by [`frequency_dependence_study`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StudyElement {
    PowerLaw(PowerLawHysteresisElement),
    Lamp(HysteresisLamp),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyRow {
    pub omega: f64,
    pub area: f64,
    pub class: LoopClass,
    pub points: Vec<(f64, f64)>,
}

/// Loop of an element driven by `i = amplitude · sin(ωt)` at each `ω`.
///
/// Samples sit at the phases `2πj/n`, so a rate-independent element yields
/// the same point set at every frequency. Area and class refer to the
/// positive-current lobe.
pub fn frequency_dependence_study(
    e: &StudyElement,
    amplitude: f64,
    omegas: &[f64],
    n: usize,
    exec: Exec,
) -> Result<Vec<FrequencyRow>> {
    if !(amplitude.is_finite() && amplitude > 0.0) {
        return Err(Error::InvalidInput(format!("amplitude must be positive, got {amplitude}")));
    }
    exec.map(omegas, |&omega| {
        let period = TAU / omega;
        let phase = |j: usize| TAU * j as f64 / n as f64;
        let i: Vec<f64> = (0..n).map(|j| amplitude * phase(j).sin()).collect();
        let v: Vec<f64> = match e {
            StudyElement::Lamp(l) => (0..n)
                .map(|j| l.a1() * sign(i[j]) + l.l_prime() * amplitude * omega * phase(j).cos())
                .collect(),
            StudyElement::PowerLaw(p) => {
                let mut last = 1.0;
                let mut out = Vec::with_capacity(n);
                for (j, &ij) in i.iter().enumerate().take(n) {
                    let d = sign(phase(j).cos());
                    if d != 0.0 {
                        last = d;
                    }
                    out.push(crate::elements::powerlaw_voltage(p, ij, last)?);
                }
                out
            }
        };
        let lp = extract_loop(
            &PeriodicWaveform::new(period, i, Unit::Ampere)?,
            &PeriodicWaveform::new(period, v, Unit::Volt)?,
        )?;
        let lobe = lp.positive_lobe()?;
        Ok(FrequencyRow { omega, area: lobe.area(), class: classify_loop(&lobe), points: lp.points })
    })
    .into_iter()
    .collect()
}

/// Extreme finite-difference slopes `dv/di` along the loop, skipping points
/// with `|i| < exclusion` and segments adjacent to turning points of `i`.
pub fn dvdi_range(l: &HysteresisLoop, exclusion: f64) -> Result<(f64, f64)> {
    let p = &l.points;
    let n = p.len();
    let di = |k: usize| p[(k + 1) % n].0 - p[k].0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..n {
        let (a, b) = (p[k], p[(k + 1) % n]);
        let d = di(k);
        if d == 0.0 || a.0.abs() < exclusion || b.0.abs() < exclusion {
            continue;
        }
        if d * di((k + n - 1) % n) <= 0.0 || d * di((k + 1) % n) <= 0.0 {
            continue;
        }
        let slope = (b.1 - a.1) / d;
        lo = lo.min(slope);
        hi = hi.max(slope);
    }
    if lo > hi {
        return Err(Error::TooFewPoints(format!("no loop segment outside |i| < {exclusion}")));
    }
    Ok((lo, hi))
}

/// [`dvdi_range`] with the default band of 5% of `max |i|`.
pub fn dvdi_range_default(l: &HysteresisLoop) -> Result<(f64, f64)> {
    let imax = l.points.iter().fold(0.0f64, |m, p| m.max(p.0.abs()));
    dvdi_range(l, DVDI_EXCLUSION * imax)
}
