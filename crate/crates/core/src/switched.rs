//! Switched-linear systems `dx/dt = A_m x + B_m u(t)` whose mode `m` changes
//! at prescribed instants or when a state component crosses a level.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Switch count beyond which a run is treated as chattering.
pub const ZENO_LIMIT: usize = 1_000_000;
/// State magnitude treated as escape to infinity.
pub const BOUND: f64 = 1e6;
/// Initial and renormalized separation of the twin trajectories.
pub const LYAPUNOV_DELTA: f64 = 1e-8;
const EVENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
}

impl Mode {
    /// Mode without input.
    pub fn autonomous(a: DMatrix<f64>) -> Self {
        let d = a.nrows();
        Self { a, b: DMatrix::zeros(d, 0) }
    }
}

/// Input waveform `u(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Zero,
    Constant(DVector<f64>),
    Sine { amplitude: DVector<f64>, omega: f64 },
}

impl Input {
    fn dim(&self) -> Option<usize> {
        match self {
            Input::Zero => None,
            Input::Constant(v) => Some(v.len()),
            Input::Sine { amplitude, .. } => Some(amplitude.len()),
        }
    }

    fn eval(&self, t: f64) -> Option<DVector<f64>> {
        match self {
            Input::Zero => None,
            Input::Constant(v) => Some(v.clone()),
            Input::Sine { amplitude, omega } => Some(amplitude * (omega * t).sin()),
        }
    }

    pub fn scaled(&self, k: f64) -> Input {
        match self {
            Input::Zero => Input::Zero,
            Input::Constant(v) => Input::Constant(v * k),
            Input::Sine { amplitude, omega } => Input::Sine { amplitude: amplitude * k, omega: *omega },
        }
    }

    /// Period of the drive, if periodic and non-constant.
    pub fn period(&self) -> Option<f64> {
        match self {
            Input::Sine { omega, .. } => Some(TAU / omega),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SwitchRule {
    None,
    /// Mode `modes[k]` takes over at `times[k]`; with a period the schedule
    /// repeats and `times` must lie in `[0, period)`.
    Schedule { times: Vec<f64>, modes: Vec<usize>, period: Option<f64> },
    /// Mode `rising` when `x[index]` crosses `threshold` upward, `falling`
    /// when it crosses downward.
    Level { index: usize, threshold: f64, rising: usize, falling: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchedLinearSystem {
    pub modes: Vec<Mode>,
    pub rule: SwitchRule,
    pub input: Input,
    /// Mode at `t = 0` when the rule does not fix it.
    pub initial_mode: usize,
}

impl SwitchedLinearSystem {
    pub fn new(modes: Vec<Mode>, rule: SwitchRule, input: Input, initial_mode: usize) -> Result<Self> {
        let d = modes.first().ok_or_else(|| Error::InvalidInput("at least one mode required".into()))?.a.nrows();
        if d == 0 {
            return Err(Error::InvalidInput("state dimension must be positive".into()));
        }
        let p = input.dim();
        for (k, m) in modes.iter().enumerate() {
            if m.a.nrows() != d || m.a.ncols() != d {
                return Err(Error::DimensionMismatch { expected: d, got: m.a.nrows().max(m.a.ncols()) });
            }
            if m.b.nrows() != d {
                return Err(Error::DimensionMismatch { expected: d, got: m.b.nrows() });
            }
            if let Some(p) = p {
                if m.b.ncols() != p {
                    return Err(Error::DimensionMismatch { expected: p, got: m.b.ncols() });
                }
            }
            if m.a.iter().chain(m.b.iter()).any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("mode {k} has non-finite entries")));
            }
        }
        let n = modes.len();
        let valid = |m: usize| m < n;
        if !valid(initial_mode) {
            return Err(Error::InvalidInput(format!("initial mode {initial_mode} out of range")));
        }
        match &rule {
            SwitchRule::None => {}
            SwitchRule::Schedule { times, modes: ms, period } => {
                if n < 2 || times.len() != ms.len() || !ms.iter().all(|&m| valid(m)) {
                    return Err(Error::InvalidInput("schedule needs two or more modes and one valid mode per instant".into()));
                }
                if times.windows(2).any(|w| w[1] <= w[0]) || times.iter().any(|t| !t.is_finite() || *t < 0.0) {
                    return Err(Error::InvalidInput("schedule instants must be finite, non-negative and increasing".into()));
                }
                if let Some(p) = period {
                    if !(p.is_finite() && *p > 0.0) || times.last().is_some_and(|t| t >= p) {
                        return Err(Error::InvalidInput("periodic schedule instants must lie in [0, period)".into()));
                    }
                }
            }
            SwitchRule::Level { index, threshold, rising, falling } => {
                if n < 2 || *index >= d || !valid(*rising) || !valid(*falling) || !threshold.is_finite() {
                    return Err(Error::InvalidInput("level rule needs two or more modes and a valid state index".into()));
                }
            }
        }
        Ok(Self { modes, rule, input, initial_mode })
    }

    pub fn dim(&self) -> usize {
        self.modes[0].a.nrows()
    }

    /// Same system with the input scaled by `k`.
    pub fn with_input_scaled(&self, k: f64) -> Self {
        Self { input: self.input.scaled(k), ..self.clone() }
    }

    fn level_mode(&self, x: &DVector<f64>) -> Option<usize> {
        match &self.rule {
            SwitchRule::Level { index, threshold, rising, falling } => {
                let g = x[*index] - threshold;
                if g > 0.0 {
                    Some(*rising)
                } else if g < 0.0 {
                    Some(*falling)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn start_mode(&self, x0: &DVector<f64>) -> usize {
        match &self.rule {
            SwitchRule::Schedule { times, modes, period: None } => {
                times.iter().zip(modes).take_while(|(t, _)| **t <= 0.0).last().map_or(self.initial_mode, |(_, m)| *m)
            }
            SwitchRule::Schedule { times, modes, period: Some(_) } => {
                if times.first() == Some(&0.0) {
                    modes[0]
                } else {
                    self.initial_mode
                }
            }
            _ => self.level_mode(x0).unwrap_or(self.initial_mode),
        }
    }

    /// Next scheduled instant in `(t, t_end]` and the mode it selects.
    fn next_scheduled(&self, t: f64, t_end: f64) -> Option<(f64, usize)> {
        let SwitchRule::Schedule { times, modes, period } = &self.rule else {
            return None;
        };
        let hit = match period {
            None => times.iter().zip(modes).find(|(s, _)| **s > t).map(|(s, m)| (*s, *m)),
            Some(p) => {
                let base = (t / p).floor() * p;
                (0..2)
                    .flat_map(|r| times.iter().zip(modes).map(move |(s, m)| (base + r as f64 * p + s, *m)))
                    .find(|(s, _)| *s > t)
            }
        };
        hit.filter(|(s, _)| *s <= t_end)
    }

    fn rhs(&self, mode: usize, t: f64, x: &DVector<f64>) -> DVector<f64> {
        let m = &self.modes[mode];
        let mut dx = &m.a * x;
        if let Some(u) = self.input.eval(t) {
            dx += &m.b * u;
        }
        dx
    }

    fn rk4(&self, mode: usize, t: f64, x: &DVector<f64>, h: f64) -> DVector<f64> {
        let k1 = self.rhs(mode, t, x);
        let k2 = self.rhs(mode, t + 0.5 * h, &(x + &k1 * (0.5 * h)));
        let k3 = self.rhs(mode, t + 0.5 * h, &(x + &k2 * (0.5 * h)));
        let k4 = self.rhs(mode, t + h, &(x + &k3 * h));
        x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchedTrajectory {
    /// Grid instants plus every switching instant.
    pub times: Vec<f64>,
    pub states: Vec<DVector<f64>>,
    /// Mode in force from each sample on.
    pub modes: Vec<usize>,
    pub switch_times: Vec<f64>,
}

impl SwitchedTrajectory {
    fn push(&mut self, t: f64, x: &DVector<f64>, mode: usize) {
        self.times.push(t);
        self.states.push(x.clone());
        self.modes.push(mode);
    }

    /// Component `k` of every sample.
    pub fn component(&self, k: usize) -> Vec<f64> {
        self.states.iter().map(|x| x[k]).collect()
    }
}

/// What happens at a level crossing.
#[derive(Debug, Clone, Copy)]
enum Action {
    Switch,
    /// Mirror reflection: pin `index` to the level and negate `velocity`.
    Reflect { velocity: usize },
}

struct Sim<'a> {
    sys: &'a SwitchedLinearSystem,
    level: Option<(usize, f64)>,
    action: Action,
    dt: f64,
    t: f64,
    x: DVector<f64>,
    mode: usize,
    switches: usize,
}

impl<'a> Sim<'a> {
    fn new(sys: &'a SwitchedLinearSystem, x0: DVector<f64>, dt: f64) -> Self {
        let level = match &sys.rule {
            SwitchRule::Level { index, threshold, .. } => Some((*index, *threshold)),
            _ => None,
        };
        let mode = sys.start_mode(&x0);
        Self { sys, level, action: Action::Switch, dt, t: 0.0, x: x0, mode, switches: 0 }
    }

    fn mirror(sys: &'a SwitchedLinearSystem, x0: DVector<f64>, dt: f64, index: usize, velocity: usize) -> Self {
        let mut s = Self::new(sys, x0, dt);
        s.level = Some((index, 0.0));
        s.action = Action::Reflect { velocity };
        s
    }

    fn g(&self, x: &DVector<f64>) -> f64 {
        self.level.map_or(1.0, |(k, c)| x[k] - c)
    }

    fn register_switch(&mut self, rec: &mut Option<&mut SwitchedTrajectory>) -> Result<()> {
        self.switches += 1;
        if self.switches > ZENO_LIMIT {
            return Err(Error::Zeno(self.switches));
        }
        if let Some(r) = rec.as_deref_mut() {
            r.switch_times.push(self.t);
            r.push(self.t, &self.x, self.mode);
        }
        Ok(())
    }

    /// One grid step of length at most `dt`, ending at `te`.
    fn step(&mut self, te: f64, rec: &mut Option<&mut SwitchedTrajectory>) -> Result<()> {
        let mut level_events = 0;
        while self.t < te {
            let (seg_end, scheduled) = match self.sys.next_scheduled(self.t, te) {
                Some((s, m)) => (s, Some(m)),
                None => (te, None),
            };
            let h = seg_end - self.t;
            let x_new = self.sys.rk4(self.mode, self.t, &self.x, h);
            let g0 = self.g(&self.x);
            let crossed = |y: &DVector<f64>| {
                let g = self.g(y);
                g == 0.0 || (g > 0.0) != (g0 > 0.0)
            };
            if self.level.is_some() && g0 != 0.0 && crossed(&x_new) {
                level_events += 1;
                if level_events > 1 {
                    return Err(Error::StepTooLarge(format!("two level crossings inside the step ending at {te}")));
                }
                let (mut lo, mut hi) = (0.0, h);
                while hi - lo > EVENT_TOL * self.dt {
                    let mid = 0.5 * (lo + hi);
                    if crossed(&self.sys.rk4(self.mode, self.t, &self.x, mid)) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                self.x = self.sys.rk4(self.mode, self.t, &self.x, hi);
                self.t += hi;
                let rising = g0 < 0.0;
                match self.action {
                    Action::Switch => {
                        let next = match &self.sys.rule {
                            SwitchRule::Level { rising: r, falling: f, .. } => {
                                if rising {
                                    *r
                                } else {
                                    *f
                                }
                            }
                            _ => self.mode,
                        };
                        if next != self.mode {
                            self.mode = next;
                            self.register_switch(rec)?;
                        }
                    }
                    Action::Reflect { velocity } => {
                        let (k, c) = self.level.expect("reflection level");
                        self.x[k] = c;
                        self.x[velocity] = -self.x[velocity];
                        self.register_switch(rec)?;
                    }
                }
                continue;
            }
            self.x = x_new;
            self.t = seg_end;
            if let Some(m) = scheduled {
                if m != self.mode {
                    self.mode = m;
                    self.register_switch(rec)?;
                }
            }
        }
        let peak = self.x.amax();
        if peak.is_nan() || peak > BOUND {
            return Err(Error::Unbounded(peak));
        }
        Ok(())
    }

    /// Advances on the global `dt` grid up to `t_end`.
    fn run(&mut self, t_end: f64, mut rec: Option<&mut SwitchedTrajectory>) -> Result<()> {
        if let Some(r) = rec.as_deref_mut() {
            if r.times.is_empty() {
                r.push(self.t, &self.x, self.mode);
            }
        }
        while self.t < t_end * (1.0 - 1e-15) {
            let k = (self.t / self.dt + 1e-9).floor() + 1.0;
            let te = (k * self.dt).min(t_end);
            self.step(te, &mut rec)?;
            self.t = te;
            if let Some(r) = rec.as_deref_mut() {
                r.push(self.t, &self.x, self.mode);
            }
        }
        Ok(())
    }
}

fn check_run(sys: &SwitchedLinearSystem, x0: &DVector<f64>, t_end: f64, dt: f64) -> Result<()> {
    if x0.len() != sys.dim() {
        return Err(Error::DimensionMismatch { expected: sys.dim(), got: x0.len() });
    }
    if !(dt.is_finite() && dt > 0.0 && t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::InvalidInput(format!("need dt > 0 and t_end >= 0, got dt={dt}, t_end={t_end}")));
    }
    let norm = sys.modes.iter().map(|m| m.a.row_iter().map(|r| r.abs().sum()).fold(0.0, f64::max)).fold(0.0, f64::max);
    if dt * norm >= 0.1 {
        return Err(Error::StepTooLarge(format!("dt * |A| = {} must stay below 0.1", dt * norm)));
    }
    Ok(())
}

/// Fixed-step RK4 simulation with switching instants located by bisection
/// to `1e-10·dt`; the state passes continuously through each switch.
pub fn simulate_switched(
    sys: &SwitchedLinearSystem,
    x0: &DVector<f64>,
    t_end: f64,
    dt: f64,
) -> Result<SwitchedTrajectory> {
    check_run(sys, x0, t_end, dt)?;
    let mut traj = SwitchedTrajectory { times: vec![], states: vec![], modes: vec![], switch_times: vec![] };
    Sim::new(sys, x0.clone(), dt).run(t_end, Some(&mut traj))?;
    Ok(traj)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchClass {
    Lti,
    Ltv,
    Nl,
}

impl SwitchClass {
    pub fn label(self) -> &'static str {
        match self {
            SwitchClass::Lti => "LTI",
            SwitchClass::Ltv => "LTV",
            SwitchClass::Nl => "NL",
        }
    }
}

/// LTI without switching, LTV for prescribed instants, NL when the instants
/// depend on the state.
pub fn classify_switching(sys: &SwitchedLinearSystem, traj: &SwitchedTrajectory) -> SwitchClass {
    match sys.rule {
        _ if traj.switch_times.is_empty() => SwitchClass::Lti,
        SwitchRule::None => SwitchClass::Lti,
        SwitchRule::Schedule { .. } => SwitchClass::Ltv,
        SwitchRule::Level { .. } => SwitchClass::Nl,
    }
}

/// Comparison of a run with input `u` from `x0` against one with `k·u`
/// from `k·x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingProbe {
    /// Largest shift of a switching instant (infinite if counts differ).
    pub max_instant_shift: f64,
    /// `max |x_k − k·x| / max |k·x|` over the common grid.
    pub state_defect: f64,
}

impl ScalingProbe {
    /// Superposition holds: instants fixed and states scale.
    pub fn is_linear(&self, tol: f64) -> bool {
        self.max_instant_shift == 0.0 && self.state_defect < tol
    }
}

pub fn scaling_probe(
    sys: &SwitchedLinearSystem,
    x0: &DVector<f64>,
    t_end: f64,
    dt: f64,
    k: f64,
) -> Result<ScalingProbe> {
    let a = simulate_switched(sys, x0, t_end, dt)?;
    let b = simulate_switched(&sys.with_input_scaled(k), &(x0 * k), t_end, dt)?;
    let max_instant_shift = if a.switch_times.len() != b.switch_times.len() {
        f64::INFINITY
    } else {
        a.switch_times.iter().zip(&b.switch_times).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()))
    };
    let grid = |tr: &SwitchedTrajectory| -> Vec<DVector<f64>> {
        let mut out = Vec::new();
        for (j, t) in tr.times.iter().enumerate() {
            let on_grid = ((t / dt).round() * dt - t).abs() <= 1e-9 * dt;
            if on_grid && out.len() as f64 <= t / dt + 0.5 && !tr.switch_times.contains(t) {
                out.push(tr.states[j].clone());
            }
        }
        out
    };
    let (ga, gb) = (grid(&a), grid(&b));
    let scale = ga.iter().map(|x| x.amax()).fold(0.0, f64::max) * k.abs();
    let diff = ga.iter().zip(&gb).map(|(x, y)| (y - x * k).amax()).fold(0.0, f64::max);
    let state_defect = if scale > 0.0 { diff / scale } else { diff };
    Ok(ScalingProbe { max_instant_shift, state_defect })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovSettings {
    pub horizon: f64,
    pub renorm_interval: f64,
    pub dt: f64,
    /// Time integrated before measuring, to reach the attractor.
    pub transient: f64,
}

impl Default for LyapunovSettings {
    fn default() -> Self {
        Self { horizon: 2000.0, renorm_interval: 1.0, dt: 0.01, transient: 100.0 }
    }
}

/// Largest Lyapunov exponent from a twin trajectory renormalized to
/// `LYAPUNOV_DELTA` every `renorm_interval`.
pub fn largest_lyapunov(sys: &SwitchedLinearSystem, x0: &DVector<f64>, s: &LyapunovSettings) -> Result<f64> {
    check_run(sys, x0, s.horizon, s.dt)?;
    if !(s.renorm_interval > 0.0 && s.horizon >= s.renorm_interval) {
        return Err(Error::InvalidInput("renormalization interval must be positive and within the horizon".into()));
    }
    let mut a = Sim::new(sys, x0.clone(), s.dt);
    a.run(s.transient, None)?;
    let mut offset = DVector::zeros(x0.len());
    offset[0] = LYAPUNOV_DELTA;
    let mut b = Sim::new(sys, &a.x + offset, s.dt);
    b.t = a.t;
    b.mode = sys.level_mode(&b.x).unwrap_or(a.mode);
    let intervals = (s.horizon / s.renorm_interval).round() as usize;
    let mut sum = 0.0;
    for k in 1..=intervals {
        let t = s.transient + k as f64 * s.renorm_interval;
        a.run(t, None)?;
        b.run(t, None)?;
        let sep = &b.x - &a.x;
        let d = sep.norm();
        if d == 0.0 {
            return Err(Error::DegenerateInput("twin trajectories merged exactly".into()));
        }
        sum += (d / LYAPUNOV_DELTA).ln();
        b.x = &a.x + sep * (LYAPUNOV_DELTA / d);
        if let Some(m) = sys.level_mode(&b.x) {
            b.mode = m;
        }
    }
    Ok(sum / (intervals as f64 * s.renorm_interval))
}

/// Result of [`mirror_reflection_map`].
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorRun {
    pub trajectory: SwitchedTrajectory,
    /// Minimum over candidate periods of the normalized stroboscopic
    /// recurrence distance: near zero for periodic motion.
    pub aperiodicity: f64,
}

/// Integrates a single-mode position/velocity system and reflects it at each
/// zero of `x₁`: the velocity `x₂` changes sign and `x₁` continues on the
/// same side.
pub fn mirror_reflection_map(
    base: &SwitchedLinearSystem,
    x0: &DVector<f64>,
    t_end: f64,
    dt: f64,
) -> Result<MirrorRun> {
    if base.dim() != 2 || base.modes.len() != 1 || base.rule != SwitchRule::None {
        return Err(Error::InvalidInput("mirror map needs a single-mode system of dimension 2".into()));
    }
    check_run(base, x0, t_end, dt)?;
    let mut traj = SwitchedTrajectory { times: vec![], states: vec![], modes: vec![], switch_times: vec![] };
    let strobe = base.input.period().unwrap_or(TAU);
    let mut sim = Sim::mirror(base, x0.clone(), dt, 0, 1);
    let mut samples = Vec::new();
    let mut k = 1.0;
    while k * strobe <= t_end {
        sim.run(k * strobe, Some(&mut traj))?;
        if k * strobe >= 0.5 * t_end {
            samples.push(sim.x.clone());
        }
        k += 1.0;
    }
    sim.run(t_end, Some(&mut traj))?;
    let late: Vec<f64> =
        traj.times.iter().zip(&traj.states).filter(|(t, _)| **t >= 0.5 * t_end).map(|(_, x)| x.norm_squared()).collect();
    let scale = (late.iter().sum::<f64>() / late.len().max(1) as f64).sqrt();
    Ok(MirrorRun { trajectory: traj, aperiodicity: recurrence_measure(&samples, scale) })
}

/// Stroboscopic samples compared with their shifts by 1..=20 strobe
/// periods, relative to the RMS state size `scale`.
fn recurrence_measure(samples: &[DVector<f64>], scale: f64) -> f64 {
    let m = samples.len();
    if m < 4 {
        return f64::NAN;
    }
    if scale == 0.0 {
        return 0.0;
    }
    (1..=20.min(m / 2))
        .map(|p| (0..m - p).map(|j| (&samples[j + p] - &samples[j]).norm()).sum::<f64>() / ((m - p) as f64 * scale))
        .fold(f64::INFINITY, f64::min)
}

/// Parameters of the driven oscillator pair: a damped mode
/// `x'' + 2ζx' + x = u` for `x₁ > c` and a pumped mode
/// `x'' − 2px' + kx = u` for `x₁ < c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorPair {
    pub damping: f64,
    pub pumping: f64,
    pub stiffness: f64,
    pub threshold: f64,
    pub drive: f64,
    pub omega: f64,
}

impl OscillatorPair {
    pub fn system(&self) -> Result<SwitchedLinearSystem> {
        let mode = |zeta: f64, k: f64| Mode {
            a: DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -k, -2.0 * zeta]),
            b: DMatrix::from_row_slice(2, 1, &[0.0, 1.0]),
        };
        SwitchedLinearSystem::new(
            vec![mode(self.damping, 1.0), mode(-self.pumping, self.stiffness)],
            SwitchRule::Level { index: 0, threshold: self.threshold, rising: 0, falling: 1 },
            Input::Sine { amplitude: DVector::from_element(1, self.drive), omega: self.omega },
            0,
        )
    }
}

/// Largest Lyapunov exponent over a grid of oscillator-pair parameters.
/// Runs that escape or chatter report their error.
pub fn chaos_parameter_sweep(
    grid: &[OscillatorPair],
    x0: &DVector<f64>,
    s: &LyapunovSettings,
    exec: Exec,
) -> Vec<(OscillatorPair, Result<f64>)> {
    exec.map(grid, |p| (*p, p.system().and_then(|sys| largest_lyapunov(&sys, x0, s))))
}

/// Single stable mode with eigenvalues `−1 ± 2j`.
pub fn stable_fixture() -> SwitchedLinearSystem {
    let a = DMatrix::from_row_slice(2, 2, &[-1.0, 2.0, -2.0, -1.0]);
    SwitchedLinearSystem::new(vec![Mode::autonomous(a)], SwitchRule::None, Input::Zero, 0).expect("valid fixture")
}

/// Undamped unit oscillator `x'' + x = 0`.
pub fn lossless_oscillator() -> SwitchedLinearSystem {
    let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    SwitchedLinearSystem::new(vec![Mode::autonomous(a)], SwitchRule::None, Input::Zero, 0).expect("valid fixture")
}

/// Driven oscillator whose stiffness is switched on a periodic schedule.
pub fn schedule_fixture() -> SwitchedLinearSystem {
    let a0 = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, -0.5]);
    let a1 = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -4.0, -0.5]);
    let b = DMatrix::from_row_slice(2, 1, &[0.0, 1.0]);
    SwitchedLinearSystem::new(
        vec![Mode { a: a0, b: b.clone() }, Mode { a: a1, b }],
        SwitchRule::Schedule { times: vec![0.5, 1.7], modes: vec![1, 0], period: Some(2.5) },
        Input::Sine { amplitude: DVector::from_element(1, 1.0), omega: 2.0 },
        0,
    )
    .expect("valid fixture")
}

/// Level-switched pair with a non-zero threshold, so its switching instants
/// move when the input is scaled.
pub fn level_fixture() -> SwitchedLinearSystem {
    OscillatorPair { damping: 0.2, pumping: 0.1, stiffness: 1.0, threshold: 0.3, drive: 1.0, omega: 1.3 }
        .system()
        .expect("valid fixture")
}

/// Parameter set stored as the chaotic regression fixture.
pub const CHAOS_FIXTURE: OscillatorPair =
    OscillatorPair { damping: 0.1, pumping: 0.02, stiffness: 4.0, threshold: 0.5, drive: 1.0, omega: 2.5 };

/// Initial state used with [`CHAOS_FIXTURE`].
pub fn chaos_fixture_x0() -> DVector<f64> {
    DVector::from_row_slice(&[0.1, 0.0])
}

#[cfg(test)]
mod tests {
    use super::*;


    #[test]
    fn single_mode_matches_matrix_exponential() {
        let sys = stable_fixture();
        let x0 = DVector::from_row_slice(&[1.0, 0.5]);
        let tr = simulate_switched(&sys, &x0, 5.0, 0.01).unwrap();
        for (t, x) in tr.times.iter().zip(&tr.states) {
            let exact = (&sys.modes[0].a * *t).exp() * &x0;
            assert!((x - exact).amax() < 1e-8);
        }
        assert!(tr.switch_times.is_empty());
        assert_eq!(classify_switching(&sys, &tr), SwitchClass::Lti);
    }

    #[test]
    fn rejects_bad_systems() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let bad_rule = SwitchRule::Level { index: 5, threshold: 0.0, rising: 0, falling: 1 };
        assert!(SwitchedLinearSystem::new(
            vec![Mode::autonomous(a.clone()), Mode::autonomous(a.clone())],
            bad_rule,
            Input::Zero,
            0
        )
        .is_err());
        let one_mode = SwitchRule::Level { index: 0, threshold: 0.0, rising: 0, falling: 0 };
        assert!(SwitchedLinearSystem::new(vec![Mode::autonomous(a)], one_mode, Input::Zero, 0).is_err());
    }

    #[test]
    fn schedule_is_followed_exactly() {
        let sys = schedule_fixture();
        let tr = simulate_switched(&sys, &DVector::zeros(2), 10.0, 0.01).unwrap();
        let expected: Vec<f64> = (0..4).flat_map(|k| [0.5 + 2.5 * k as f64, 1.7 + 2.5 * k as f64]).collect();
        assert_eq!(tr.switch_times.len(), expected.len());
        for (a, b) in tr.switch_times.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(classify_switching(&sys, &tr), SwitchClass::Ltv);
        let probe = scaling_probe(&sys, &DVector::zeros(2), 10.0, 0.01, 2.0).unwrap();
        assert!(probe.is_linear(1e-9), "{probe:?}");
    }

    fn level_system(threshold: f64) -> SwitchedLinearSystem {
        OscillatorPair { threshold, ..LEVEL }.system().unwrap()
    }

    const LEVEL: OscillatorPair =
        OscillatorPair { damping: 0.2, pumping: 0.1, stiffness: 1.0, threshold: 0.0, drive: 1.0, omega: 1.3 };

    #[test]
    fn level_instants_match_trace_crossings() {
        let sys = level_system(0.0);
        let dt = 0.01;
        let tr = simulate_switched(&sys, &DVector::from_row_slice(&[0.3, 0.0]), 40.0, dt).unwrap();
        assert!(tr.switch_times.len() > 5);
        for &t in &tr.switch_times {
            let j = tr.times.iter().position(|s| *s == t).unwrap();
            assert!(tr.states[j][0].abs() < 1e-8 * dt * tr.states[j][1].abs().max(1.0));
        }
        // mode matches the side of the level between switches
        for (x, m) in tr.states.iter().zip(&tr.modes) {
            if x[0].abs() > 1e-6 {
                assert_eq!(*m, if x[0] > 0.0 { 0 } else { 1 });
            }
        }
    }

    #[test]
    fn level_rule_fails_scaling() {
        let sys = level_fixture();
        let tr = simulate_switched(&sys, &DVector::zeros(2), 40.0, 0.01).unwrap();
        assert_eq!(classify_switching(&sys, &tr), SwitchClass::Nl);
        let probe = scaling_probe(&sys, &DVector::zeros(2), 40.0, 0.01, 2.0).unwrap();
        let period = TAU / 1.3;
        assert!(probe.max_instant_shift > 1e-6 * period, "{probe:?}");
    }

    #[test]
    fn lyapunov_signs() {
        let s = LyapunovSettings { horizon: 200.0, renorm_interval: 1.0, dt: 0.01, transient: 0.0 };
        let x0 = DVector::from_row_slice(&[1.0, 0.0]);
        let l = largest_lyapunov(&stable_fixture(), &x0, &s).unwrap();
        assert!((l + 1.0).abs() < 1e-3, "{l}");
        let l = largest_lyapunov(&lossless_oscillator(), &x0, &s).unwrap();
        assert!(l.abs() < 1e-3, "{l}");
    }

    #[test]
    fn escape_is_not_chaos() {
        let a = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.2]);
        let sys = SwitchedLinearSystem::new(vec![Mode::autonomous(a)], SwitchRule::None, Input::Zero, 0).unwrap();
        let s = LyapunovSettings { horizon: 100.0, renorm_interval: 1.0, dt: 0.01, transient: 0.0 };
        let err = largest_lyapunov(&sys, &DVector::from_row_slice(&[1.0, 1.0]), &s).unwrap_err();
        assert_eq!(err.code(), "unbounded");
    }

    #[test]
    fn mirror_without_crossings_is_plain() {
        let sys = stable_fixture();
        let x0 = DVector::from_row_slice(&[1.0, 0.0]);
        let plain = simulate_switched(&sys, &x0, 0.5, 0.01).unwrap();
        let run = mirror_reflection_map(&sys, &x0, 0.5, 0.01).unwrap();
        assert!(run.trajectory.switch_times.is_empty());
        assert_eq!(plain.states, run.trajectory.states);
    }

    #[test]
    fn mirror_conserves_speed() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, -0.1]);
        let b = DMatrix::from_row_slice(2, 1, &[0.0, 1.0]);
        let sys = SwitchedLinearSystem::new(
            vec![Mode { a, b }],
            SwitchRule::None,
            Input::Sine { amplitude: DVector::from_element(1, 1.0), omega: 1.7 },
            0,
        )
        .unwrap();
        let run = mirror_reflection_map(&sys, &DVector::from_row_slice(&[0.5, 0.0]), 60.0, 0.01).unwrap();
        let tr = &run.trajectory;
        assert!(!tr.switch_times.is_empty());
        for &t in &tr.switch_times {
            let j = tr.times.iter().rposition(|s| *s == t).unwrap();
            let (before, after) = (&tr.states[j - 1], &tr.states[j]);
            if tr.times[j - 1] == t {
                assert!((before[1].abs() - after[1].abs()).abs() < 1e-12);
            }
            assert!(after[0] == 0.0);
        }
        assert!(tr.states.iter().all(|x| x[0] >= -1e-9));
    }

    fn driven(zeta: f64, omega: f64) -> SwitchedLinearSystem {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, -2.0 * zeta]);
        let b = DMatrix::from_row_slice(2, 1, &[0.0, 1.0]);
        let input = Input::Sine { amplitude: DVector::from_element(1, 1.0), omega };
        SwitchedLinearSystem::new(vec![Mode { a, b }], SwitchRule::None, input, 0).unwrap()
    }

    #[test]
    fn mirror_aperiodicity_separates_regimes() {
        let x0 = DVector::from_row_slice(&[0.5, 0.0]);
        let periodic = mirror_reflection_map(&driven(0.5, 1.5), &x0, 1000.0, 0.005).unwrap();
        assert!(periodic.aperiodicity < 1e-9, "{}", periodic.aperiodicity);
        let irregular = mirror_reflection_map(&driven(0.02, 0.8), &x0, 2000.0, 0.005).unwrap();
        assert!(irregular.aperiodicity > 0.05, "{}", irregular.aperiodicity);
    }

    #[test]
    fn chaos_fixture_has_positive_exponent() {
        let sys = CHAOS_FIXTURE.system().unwrap();
        let s = LyapunovSettings { horizon: 500.0, ..Default::default() };
        let l = largest_lyapunov(&sys, &chaos_fixture_x0(), &s).unwrap();
        assert!(l > 0.01, "{l}");
    }

    #[test]
    fn mirror_instants_depend_on_initial_state() {
        let sys = driven(0.02, 0.8);
        let a = mirror_reflection_map(&sys, &DVector::from_row_slice(&[0.5, 0.0]), 1500.0, 0.005).unwrap();
        let b = mirror_reflection_map(&sys, &DVector::from_row_slice(&[0.5 + 1e-9, 0.0]), 1500.0, 0.005).unwrap();
        let (ta, tb) = (&a.trajectory.switch_times, &b.trajectory.switch_times);
        assert!((ta[0] - tb[0]).abs() < 1e-6);
        let split = ta.len() != tb.len() || ta.iter().zip(tb).any(|(x, y)| (x - y).abs() > 0.1);
        assert!(split);
    }
}
