use super::response::{build_state, ExactCurrent, Harmonics};
use super::{LampCircuit, SolverSettings, SteadyState};
use crate::error::{Error, Result};
use crate::signal::{locate_crossings, Direction, ZeroCrossingSet};

const SCAN_POINTS: usize = 1024;
const ROOT_TOL: f64 = 1e-12;
const POLISH_STEPS: usize = 3;

pub(crate) fn check_settings(s: &SolverSettings) -> Result<()> {
    if s.n_h == 0 || 2 * s.n_h >= s.grid {
        return Err(Error::TooManyHarmonics { n_h: s.n_h, n: s.grid });
    }
    if !(s.tol.is_finite() && s.tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {}", s.tol)));
    }
    Ok(())
}

/// Crossings of the exact current, refined on the function itself.
pub(crate) fn realized_crossings(exact: &ExactCurrent, grid: usize) -> Result<ZeroCrossingSet> {
    let period = exact.square.period();
    locate_crossings(|t| exact.eval(t), period, grid, 1e-14 * period)
}

fn cyclic_distance(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

enum Candidate {
    Consistent(f64, ExactCurrent),
    Realized(usize),
}

/// Steady state with exactly two crossings, rising at `t₁` and falling at
/// `t₁ + T/2`, for a half-wave-symmetric drive.
///
/// The scalar crossing condition `g(t₁) = i(t₁; t₁)` is scanned over one
/// period, bracketed roots are bisected and polished by Newton steps, and
/// every root is kept only if the waveform it generates really crosses zero
/// at `t₁` (rising) and `t₁ + T/2` and nowhere else.
pub fn steady_state_two_crossing(c: &LampCircuit, s: &SolverSettings) -> Result<SteadyState> {
    check_settings(s)?;
    if !c.is_half_wave_symmetric() {
        return Err(Error::InvalidInput("two-crossing solver needs a half-wave-symmetric drive".into()));
    }
    let h = Harmonics::new(c, s.n_h)?;
    let period = h.period;
    let half = 0.5 * period;

    if h.a1 == 0.0 {
        let exact = h.response(&[], Direction::Rising)?;
        let crossings = realized_crossings(&exact, s.grid)?;
        return build_state(c, &h, exact, crossings, s.grid, 0);
    }

    let g = |t1: f64| -> Result<f64> { Ok(h.response(&[t1, t1 + half], Direction::Rising)?.eval(t1)) };

    let dt = period / SCAN_POINTS as f64;
    let values = (0..SCAN_POINTS).map(|j| g(j as f64 * dt)).collect::<Result<Vec<f64>>>()?;
    let mut iterations = SCAN_POINTS;
    let mut roots = Vec::new();
    for j in 0..SCAN_POINTS {
        let (lo, hi) = (j as f64 * dt, (j + 1) as f64 * dt);
        let (glo, ghi) = (values[j], values[(j + 1) % SCAN_POINTS]);
        if glo == 0.0 {
            roots.push(lo);
            continue;
        }
        if ghi == 0.0 || (glo > 0.0) == (ghi > 0.0) {
            continue;
        }
        let (mut a, mut b, mut ga) = (lo, hi, glo);
        while b - a > ROOT_TOL * period {
            let m = 0.5 * (a + b);
            let gm = g(m)?;
            iterations += 1;
            if gm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if (gm > 0.0) == (ga > 0.0) {
                a = m;
                ga = gm;
            } else {
                b = m;
            }
        }
        let mut t = 0.5 * (a + b);
        let mut gt = g(t)?;
        let step = 1e-7 * period;
        for _ in 0..POLISH_STEPS {
            let slope = (g(t + step)? - g(t - step)?) / (2.0 * step);
            iterations += 1;
            if slope == 0.0 || !slope.is_finite() {
                break;
            }
            let tn = t - gt / slope;
            if !(tn >= lo - dt && tn <= hi + dt) {
                break;
            }
            let gn = g(tn)?;
            if gn.abs() >= gt.abs() {
                break;
            }
            t = tn;
            gt = gn;
        }
        roots.push(t.rem_euclid(period));
    }

    let match_tol = 10.0 * s.tol * period;
    let mut candidates = Vec::new();
    for &t1 in &roots {
        let exact = h.response(&[t1, t1 + half], Direction::Rising)?;
        let realized = match realized_crossings(&exact, s.grid) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let cs = realized.crossings();
        let ok = cs.len() == 2
            && cs.iter().any(|x| x.direction == Direction::Rising && cyclic_distance(x.time, t1, period) <= match_tol)
            && cs
                .iter()
                .any(|x| x.direction == Direction::Falling && cyclic_distance(x.time, t1 + half, period) <= match_tol);
        candidates.push(if ok { Candidate::Consistent(t1, exact) } else { Candidate::Realized(cs.len()) });
    }

    let mut consistent: Vec<(f64, ExactCurrent)> = Vec::new();
    let mut over = None;
    for cand in candidates {
        match cand {
            Candidate::Consistent(t, e) => consistent.push((t, e)),
            Candidate::Realized(n) if n > 2 => over = Some(over.map_or(n, |m: usize| m.max(n))),
            Candidate::Realized(_) => {}
        }
    }
    match consistent.len() {
        0 => match over {
            Some(realized) => Err(Error::AssumptionViolated { realized }),
            None => {
                let mut msg = if roots.is_empty() {
                    "crossing condition g(t1) has no sign change over one period".to_string()
                } else {
                    format!("no root of g(t1) yields a consistent two-crossing waveform (roots at {roots:?})")
                };
                if let Some(hint) = pure_inductor_hint(c) {
                    msg.push_str("; ");
                    msg.push_str(&hint);
                }
                Err(Error::NoSolution(msg))
            }
        },
        1 => {
            let (t1, exact) = consistent.pop().expect("one candidate");
            let crossings = ZeroCrossingSet::half_wave(period, t1)?;
            let state = build_state(c, &h, exact, crossings, s.grid, iterations)?;
            if state.residual > s.tol {
                return Err(Error::Divergence { iterations, residual: state.residual });
            }
            Ok(state)
        }
        _ => Err(Error::MultipleRoots(consistent.iter().map(|(t, _)| *t).collect())),
    }
}

/// Existence bounds for a pure-inductor ballast with a sine drive.
fn pure_inductor_hint(c: &LampCircuit) -> Option<String> {
    let (r, _, cap) = c.ballast.series_rlc()?;
    let sine = c.xi.n_h() >= 1
        && (c.xi.b[1] - 1.0).abs() < 1e-12
        && c.xi.a[1].abs() < 1e-12
        && (2..=c.xi.n_h()).all(|n| c.xi.magnitude(n) < 1e-12);
    if r != 0.0 || cap.is_some() || !sine {
        return None;
    }
    let a = c.element.a1();
    let weak = a * std::f64::consts::FRAC_PI_2;
    let strong = a * (1.0 + std::f64::consts::PI.powi(2) / 4.0).sqrt();
    Some(if c.u < weak {
        format!("U = {} is below the bound U >= A*pi/2 = {weak}", c.u)
    } else {
        format!("U = {} needs U >= A*sqrt(1 + pi^2/4) = {strong} for a current without zero-current dwell", c.u)
    })
}
