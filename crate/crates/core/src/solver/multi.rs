use nalgebra::{DMatrix, DVector};

use super::harmonic::{check_settings, realized_crossings};
use super::response::{build_state, ExactCurrent, Harmonics};
use super::{LampCircuit, SolverSettings, SteadyState};
use crate::error::{Error, Result};
use crate::signal::{Direction, ZeroCrossingSet};

const JACOBIAN_STEP: f64 = 1e-7;
const MAX_HALVINGS: usize = 8;

struct Problem<'a> {
    h: &'a Harmonics,
    first: Direction,
    period: f64,
}

impl Problem<'_> {
    fn valid(&self, t: &[f64]) -> bool {
        t.iter().all(|x| x.is_finite())
            && t.windows(2).all(|w| w[1] > w[0])
            && t.last().zip(t.first()).is_none_or(|(b, a)| b - a < self.period)
    }

    fn response(&self, t: &[f64]) -> Result<ExactCurrent> {
        self.h.response(t, self.first)
    }

    fn residual(&self, t: &[f64]) -> Result<Vec<f64>> {
        let r = self.response(t)?;
        Ok(t.iter().map(|&tp| r.eval(tp)).collect())
    }
}

fn inf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Steady state with `2m` crossings by damped Newton iteration on
/// `F_p = i(t_p; {t_k})`, starting from `guess`.
///
/// The Jacobian is a central difference in each `t_k`; a step is halved up to
/// eight times until the residual decreases. After convergence the crossings
/// of the synthesized current are re-detected and must coincide with the
/// solved instants.
pub fn multi_crossing_solver(c: &LampCircuit, guess: &ZeroCrossingSet, s: &SolverSettings) -> Result<SteadyState> {
    check_settings(s)?;
    if guess.is_empty() {
        return Err(Error::InvalidInput("initial guess needs at least two crossings".into()));
    }
    let h = Harmonics::new(c, s.n_h)?;
    let period = h.period;
    let p = Problem { h: &h, first: guess.crossings()[0].direction, period };
    let m = guess.len();
    let mut t = guess.times();
    let step = JACOBIAN_STEP * period;

    let mut iterations = 0;
    let exact = loop {
        let r = p.response(&t)?;
        let f: Vec<f64> = t.iter().map(|&tp| r.eval(tp)).collect();
        let norm = inf_norm(&f);
        let scale = r.scale().max(f64::MIN_POSITIVE);
        if norm <= s.tol * scale {
            break r;
        }
        if iterations >= s.max_iter {
            return Err(Error::Divergence { iterations, residual: norm / scale });
        }
        iterations += 1;

        let mut jac = DMatrix::<f64>::zeros(m, m);
        for q in 0..m {
            let mut tp = t.clone();
            let mut tm = t.clone();
            tp[q] += step;
            tm[q] -= step;
            let (fp, fm) = (p.residual(&tp)?, p.residual(&tm)?);
            for row in 0..m {
                jac[(row, q)] = (fp[row] - fm[row]) / (2.0 * step);
            }
        }
        let rhs = DVector::from_iterator(m, f.iter().map(|v| -v));
        let delta = jac
            .lu()
            .solve(&rhs)
            .ok_or(Error::Divergence { iterations, residual: norm / scale })?;

        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = t.iter().zip(delta.iter()).map(|(a, d)| a + lambda * d).collect();
            if p.valid(&trial) && inf_norm(&p.residual(&trial)?) < norm {
                accepted = Some(trial);
                break;
            }
            lambda *= 0.5;
        }
        t = accepted.ok_or(Error::Divergence { iterations, residual: norm / scale })?;
    };

    let scale = exact.scale();
    if h.dc_open && exact.dc_imbalance.abs() > s.tol * scale.max(1.0) {
        return Err(Error::NoSolution(format!(
            "crossings leave a DC forcing of {} across a ballast without DC limit",
            exact.dc_imbalance
        )));
    }

    let realized = realized_crossings(&exact, s.grid)?;
    if realized.len() != m {
        return Err(Error::CrossingCountMismatch { assumed: m, realized: realized.len() });
    }
    let solved = ZeroCrossingSet::from_cyclic(period, &t, p.first)?;
    let match_tol = 10.0 * s.tol * period;
    for (a, b) in solved.crossings().iter().zip(realized.crossings()) {
        if a.direction != b.direction || (a.time - b.time).abs() > match_tol {
            return Err(Error::InconsistentCrossings(format!(
                "solved crossing {} ({}) re-detected at {} ({})",
                a.time,
                a.direction.label(),
                b.time,
                b.direction.label()
            )));
        }
    }
    build_state(c, &h, exact, solved, s.grid, iterations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::SignHardlimiter;
    use crate::signal::{BallastDescriptor, FourierSeries};
    use crate::solver::{steady_state_two_crossing, LampElement};
    use std::f64::consts::PI;

    const OMEGA: f64 = 2.0 * PI * 50.0;

    fn quick() -> SolverSettings {
        SolverSettings { n_h: 255, grid: 1024, ..Default::default() }
    }

    #[test]
    fn one_lobe_matches_two_crossing_solver() {
        let b = BallastDescriptor::series(0.0, 1.0, None).unwrap();
        let e = LampElement::Sign(SignHardlimiter::new(1.0).unwrap());
        let c = LampCircuit::sine_driven(b, e, PI, OMEGA).unwrap();
        let period = c.period();
        let guess = ZeroCrossingSet::half_wave(period, 0.2 * period).unwrap();
        let st = multi_crossing_solver(&c, &guess, &quick()).unwrap();
        let reference = steady_state_two_crossing(&c, &quick()).unwrap();
        assert!((st.t1().unwrap() - reference.t1().unwrap()).abs() < 1e-9 * period);
        assert!(st.crossings.is_half_wave_symmetric(1e-9 * period));
    }

    #[test]
    fn bad_count_reports_mismatch_or_divergence() {
        let b = BallastDescriptor::series(10.0, 1.0, None).unwrap();
        let e = LampElement::Sign(SignHardlimiter::new(1.0).unwrap());
        let mut xi = FourierSeries::zero(OMEGA, 3);
        xi.b[1] = 1.0;
        let c = LampCircuit::new(b, e, 20.0, xi).unwrap();
        let period = c.period();
        let times: Vec<f64> = (0..6).map(|k| (k as f64 + 0.3) * period / 6.0).collect();
        let guess = ZeroCrossingSet::from_cyclic(period, &times, Direction::Rising).unwrap();
        assert!(multi_crossing_solver(&c, &guess, &quick()).is_err());
    }
}
