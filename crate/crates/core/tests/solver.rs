use std::f64::consts::PI;

use zcsim::elements::{HysteresisLamp, SignHardlimiter};
use zcsim::fourier::{coefficient_decay_order, DecayOrder};
use zcsim::signal::{to_fourier, BallastDescriptor, FourierSeries, PeriodicWaveform, Unit};
use zcsim::solver::*;

const W: f64 = 2.0 * PI * 50.0;

fn sign(a: f64) -> LampElement {
    LampElement::Sign(SignHardlimiter::new(a).unwrap())
}

fn series(r: f64, l: f64, c: Option<f64>) -> BallastDescriptor {
    BallastDescriptor::series(r, l, c).unwrap()
}

fn linf_rel(a: &PeriodicWaveform, b: &PeriodicWaveform) -> f64 {
    let d = a.samples().iter().zip(b.samples()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    d / a.max_abs()
}

/// Drive with a strong third harmonic: `sin ωt − sin 3ωt`.
fn six_crossing_circuit() -> LampCircuit {
    let mut xi = FourierSeries::zero(W, 3);
    xi.b[1] = 1.0;
    xi.b[3] = -1.0;
    LampCircuit::new(series(100.0, 0.1, None), sign(5.0), 200.0, xi).unwrap()
}

#[test]
fn oracle_agrees_on_series_ballasts() {
    let fixtures = [
        series(0.0, 1.0, None),
        series(30.0, 1.0, None),
        series(0.0, 1.0, Some(30e-6)),
    ];
    for b in fixtures {
        let c = LampCircuit::sine_driven(b, sign(100.0), 311.0, W).unwrap();
        let h = steady_state_two_crossing(&c, &SolverSettings::default()).unwrap();
        let o = time_domain_oracle(&c, &OracleSettings::default()).unwrap();
        assert!(linf_rel(&h.current, &o.current) < 1e-3);
        assert_eq!(o.crossings.len(), 2);
    }
}

#[test]
fn oracle_with_lamp_inductance() {
    let lamp = LampElement::Lamp(HysteresisLamp::new(100.0, 0.05, 1.0).unwrap());
    let c = LampCircuit::sine_driven(series(30.0, 1.0, None), lamp, 311.0, W).unwrap();
    let h = steady_state_two_crossing(&c, &SolverSettings::default()).unwrap();
    let o = time_domain_oracle(&c, &OracleSettings::default()).unwrap();
    assert!(linf_rel(&h.current, &o.current) < 1e-3);
    assert!(linf_rel(&h.voltage, &o.voltage) < 1e-2);
}

#[test]
fn reported_crossings_are_zeros_of_current() {
    let c = LampCircuit::sine_driven(series(30.0, 1.0, None), sign(100.0), 311.0, W).unwrap();
    let s = SolverSettings::default();
    let st = steady_state_two_crossing(&c, &s).unwrap();
    let exact = st.exact.as_ref().unwrap();
    for t in st.crossings.times() {
        assert!(exact.eval(t).abs() < s.tol * st.current.max_abs());
    }
    let period = st.period();
    let redetected = zcsim::signal::locate_crossings(|t| exact.eval(t), period, s.grid, 1e-15 * period).unwrap();
    assert_eq!(redetected.len(), 2);
    for (a, b) in redetected.times().iter().zip(st.crossings.times()) {
        assert!((a - b).abs() < 10.0 * s.tol * period);
    }
    // sampled re-detection is limited by the slope kink at each crossing
    let sampled = zcsim::signal::detect_zerocrossings(&st.current, 1e-15).unwrap();
    for (a, b) in sampled.times().iter().zip(st.crossings.times()) {
        assert!((a - b).abs() < period / s.grid as f64);
    }
}

#[test]
fn multi_lobe_solution_has_six_crossings() {
    let c = six_crossing_circuit();
    let o = time_domain_oracle(&c, &OracleSettings::default()).unwrap();
    assert_eq!(o.crossings.len(), 6);
    let st = multi_crossing_solver(&c, &o.crossings, &SolverSettings::default()).unwrap();
    assert_eq!(st.crossings.len(), 6);
    assert!(linf_rel(&st.current, &o.current) < 1e-3);
    assert!(st.crossings.is_half_wave_symmetric(1e-8 * c.period()));
}

#[test]
fn two_crossing_solver_flags_extra_crossings() {
    let err = steady_state_two_crossing(&six_crossing_circuit(), &SolverSettings::default()).unwrap_err();
    assert!(matches!(err, zcsim::Error::AssumptionViolated { .. } | zcsim::Error::NoSolution(_)), "{err:?}");
}

#[test]
fn multi_solver_rejects_wrong_lobe_count() {
    let c = LampCircuit::sine_driven(series(30.0, 1.0, None), sign(100.0), 311.0, W).unwrap();
    let period = c.period();
    let times: Vec<f64> = (0..6).map(|k| (k as f64 + 0.1) * period / 6.0).collect();
    let guess = zcsim::signal::ZeroCrossingSet::from_cyclic(period, &times, zcsim::signal::Direction::Rising).unwrap();
    assert!(multi_crossing_solver(&c, &guess, &SolverSettings::default()).is_err());
}

#[test]
fn pure_l_decomposition_is_triangle_plus_cosine() {
    let (a, u, l) = (1.0, 4.0, 1.0);
    let c = LampCircuit::sine_driven(series(0.0, l, None), sign(a), u, W).unwrap();
    let st = steady_state_two_crossing(&c, &SolverSettings::default()).unwrap();
    let (i1, i2) = smooth_rough_decompose(&st, a, l).unwrap();
    // i₁ = −(U/ωL) cos ωt
    let amp = u / (W * l);
    for (t, x) in i1.times().zip(i1.samples()) {
        assert!((x + amp * (W * t).cos()).abs() < 1e-9 * amp);
    }
    // triangle: slope ∓A/L, zero mean
    assert!(i2.mean().abs() < 1e-12 * i2.max_abs());
    let slopes = i2.derivative();
    let max_slope = slopes.samples().iter().fold(0.0f64, |m, s| m.max(s.abs()));
    assert!((max_slope - a / l).abs() < 1e-9);
    let f2 = to_fourier(&i2, 1000).unwrap();
    let order = coefficient_decay_order(&f2, 3, 255).unwrap();
    assert!(matches!(order, DecayOrder::Polynomial(p) if (1.8..=2.2).contains(&p)), "{order:?}");
    assert!(coefficient_decay_order(&to_fourier(&i1, 1000).unwrap(), 3, 255).unwrap().at_least(3.0));
}

#[test]
fn decomposition_recombines_within_rounding() {
    let c = LampCircuit::sine_driven(series(0.0, 1.0, Some(30e-6)), sign(100.0), 311.0, W).unwrap();
    let st = steady_state_two_crossing(&c, &SolverSettings::default()).unwrap();
    let (i1, i2) = smooth_rough_decompose(&st, 100.0, 1.0).unwrap();
    let peak = st.current.max_abs();
    for ((a, b), x) in i1.samples().iter().zip(i2.samples()).zip(st.current.samples()) {
        assert!((a + b - x).abs() <= 1e-14 * peak);
    }
}

#[test]
fn linear_sweep_has_quadratic_power() {
    let c = LampCircuit::sine_driven(series(50.0, 0.0, None), LampElement::Short, 1.0, W).unwrap();
    let us = [1.0, 2.0, 5.0, 10.0, 20.0];
    for row in power_scaling_sweep(&c, &us, &SolverSettings::default()) {
        assert!((row.slope.unwrap() - 2.0).abs() < 0.01);
    }
}

#[test]
fn lamp_sweep_slope_falls_toward_one() {
    let c = LampCircuit::sine_driven(series(0.0, 1.0, None), sign(1.0), 2.0, W).unwrap();
    let us: Vec<f64> = (0..10).map(|k| 2.0 * 25f64.powf(k as f64 / 9.0)).collect();
    let rows = power_scaling_sweep(&c, &us, &SolverSettings::default());
    let slopes: Vec<f64> = rows.iter().map(|r| r.slope.unwrap()).collect();
    assert!(slopes.iter().all(|&s| s > 1.0 && s < 2.0), "{slopes:?}");
    assert!(slopes.windows(2).all(|w| w[1] < w[0]));
    assert!(slopes[slopes.len() - 1] < 1.01);
}

#[test]
fn sweep_near_threshold_and_single_point() {
    let c = LampCircuit::sine_driven(series(0.0, 1.0, None), sign(1.0), 2.0, W).unwrap();
    // first drive levels with a two-crossing steady state: U ≥ A·sqrt(1 + π²/4)
    let near = [1.87, 1.9, 1.95];
    let rows = power_scaling_sweep(&c, &near, &SolverSettings::default());
    let s = rows[1].slope.unwrap();
    assert!(s > 1.0 && (s - 2.0).abs() > 0.05, "{s}");
    let single = power_scaling_sweep(&c, &[3.0], &SolverSettings::default());
    assert!(single[0].p.is_some() && single[0].slope.is_none());
    let failing = power_scaling_sweep(&c, &[1.0, 3.0, 4.0], &SolverSettings::default());
    assert_eq!(failing[0].error.as_ref().unwrap().code(), "no-solution");
    assert!(failing[1].slope.is_some());
}

#[test]
fn sweep_is_identical_across_execution_policies() {
    let c = LampCircuit::sine_driven(series(10.0, 1.0, None), sign(20.0), 100.0, W).unwrap();
    let us = [40.0, 80.0, 160.0, 320.0];
    let s = SolverSettings { n_h: 255, grid: 1024, ..Default::default() };
    let a = power_scaling_sweep_with(&c, &us, &s, zcsim::Exec::Sequential);
    let b = power_scaling_sweep_with(&c, &us, &s, zcsim::Exec::Parallel);
    assert_eq!(a, b);
}

#[test]
fn affine_structure_of_frozen_crossings() {
    let b = series(20.0, 1.0, None);
    let n = 2048;
    let period = 2.0 * PI / W;
    let xi = PeriodicWaveform::from_fn(period, n, Unit::Dimensionless, |t| (W * t).sin()).unwrap();
    let f = frozen_singular_term(50.0, 0.2 * period, period, n).unwrap();
    for (u1, u2) in [(1.0, 2.0), (100.0, 311.0), (0.5, 1e3)] {
        let r = affine_superposition_check(&b, &xi, &f, u1, u2, 999).unwrap();
        assert!(r.deviation < 1e-10);
        assert!(r.scaling_defect > 0.1 * r.forced_norm);
    }
}
