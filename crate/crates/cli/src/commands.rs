use std::f64::consts::TAU;
use std::path::Path;

use nalgebra::DVector;
use zcsim::analysis::{
    average_power, classify_loop, extract_loop, flux_charge, frequency_dependence_study, memristive_response,
    pinch_test, poynting_balance, StudyElement,
};
use zcsim::elements::{
    powerlaw_return_point, ChargeControlledInstance, HysteresisLamp, PowerLawBranch, PowerLawHysteresisElement,
    SignHardlimiter,
};
use zcsim::fourier::{coefficient_decay_order, DecayOrder};
use zcsim::signal::{to_fourier, BallastDescriptor, FourierSeries, PeriodicWaveform};
use zcsim::solver::{
    power_scaling_sweep, quantize, smooth_rough_decompose, steady_state_two_crossing, LampCircuit, LampElement,
    SolverSettings, SteadyState,
};
use zcsim::switched::{
    classify_switching, largest_lyapunov, level_fixture, lossless_oscillator, scaling_probe, schedule_fixture,
    simulate_switched, stable_fixture, LyapunovSettings, OscillatorPair, SwitchedLinearSystem,
};
use zcsim::Exec;

use crate::config::Config;
use crate::output::{num, Summary, Table};
use crate::CliError;

fn element(cfg: &Config) -> Result<LampElement, CliError> {
    let e = &cfg.element;
    if e.a == 0.0 {
        return Ok(LampElement::Short);
    }
    Ok(match e.kind.as_str() {
        "short" => LampElement::Short,
        "sign" => LampElement::Sign(SignHardlimiter::new(e.a)?),
        "lamp" => LampElement::Lamp(HysteresisLamp::new(e.a, e.l_prime, cfg.ballast.l)?),
        other => return Err(CliError::Config(format!("element.kind must be sign, lamp or short, got '{other}'"))),
    })
}

fn circuit(cfg: &Config, u: f64) -> Result<LampCircuit, CliError> {
    let b = &cfg.ballast;
    let ballast = BallastDescriptor::series(b.r, b.l, (b.c != 0.0).then_some(b.c))?;
    let h = &cfg.drive.harmonics;
    if h.is_empty() {
        return Err(CliError::Config("drive.harmonics must list at least the fundamental".into()));
    }
    let mut sin = vec![0.0];
    sin.extend_from_slice(h);
    let xi = FourierSeries::new(cfg.drive.omega, vec![0.0; sin.len()], sin)?;
    Ok(LampCircuit::new(ballast, element(cfg)?, u, xi)?)
}

fn settings(cfg: &Config) -> SolverSettings {
    SolverSettings { n_h: cfg.solver.n_h, tol: cfg.solver.tol, grid: cfg.solver.grid, ..Default::default() }
}

fn waveform_table(header: &[&str], columns: &[&PeriodicWaveform], periods: usize) -> Table {
    let mut t = Table::new(header);
    let w = columns[0];
    for p in 0..periods {
        for j in 0..w.len() {
            let mut row = vec![p as f64 * w.period() + w.time(j)];
            row.extend(columns.iter().map(|c| c.samples()[j]));
            t.row(&row);
        }
    }
    t
}

fn solve(cfg: &Config, s: &mut Summary) -> Result<(LampCircuit, SteadyState), CliError> {
    let c = circuit(cfg, cfg.drive.u)?;
    let st = steady_state_two_crossing(&c, &settings(cfg))?;
    if let Some(t1) = st.t1() {
        s.num("t1", t1);
        s.num("omega_t1", c.omega() * t1);
    }
    s.put("crossings", st.crossings.times().iter().map(|t| num(*t)).collect::<Vec<_>>().join(" "));
    s.put("iterations", st.iterations.to_string());
    s.num("residual", st.residual);
    Ok((c, st))
}

pub fn lamp_steady(cfg: &Config, dir: &Path, s: &mut Summary) -> Result<(), CliError> {
    let (c, st) = solve(cfg, s)?;
    let p = average_power(&st.current, &st.voltage)?;
    let a1_mean = c.element.a1() * st.current.samples().iter().map(|x| x.abs()).sum::<f64>() / st.current.len() as f64;
    s.num("p", p);
    s.num("p_source", average_power(&st.current, &st.source)?);
    s.num("a1_mean_abs_i", a1_mean);
    s.num("power_identity_residual", if p != 0.0 { (p - a1_mean).abs() / p.abs() } else { (p - a1_mean).abs() });
    waveform_table(&["t", "i", "v_element", "v_source"], &[&st.current, &st.voltage, &st.source], cfg.output.periods)
        .write(dir, "waveforms.csv")?;
    match extract_loop(&st.current, &st.voltage) {
        Ok(lp) => {
            s.put("loop_class", classify_loop(&lp).label());
            s.num("loop_area", lp.area());
            let mut t = Table::new(&["i", "v"]);
            lp.points.iter().for_each(|(i, v)| t.row(&[*i, *v]));
            t.write(dir, "loop.csv")?;
        }
        Err(e) => s.put("loop_class", format!("none ({})", e.code())),
    }
    Ok(())
}

pub fn lamp_sweep(cfg: &Config, dir: &Path, s: &mut Summary) -> Result<(), CliError> {
    let sw = &cfg.sweep;
    let grid: Vec<f64> = if !sw.u.is_empty() {
        sw.u.clone()
    } else {
        if sw.points == 0 || !(sw.u_min > 0.0 && sw.u_max >= sw.u_min) {
            return Err(CliError::Config("sweep needs points >= 1 and 0 < u_min <= u_max".into()));
        }
        let ratio = (sw.u_max / sw.u_min).ln();
        let step = if sw.points > 1 { ratio / (sw.points - 1) as f64 } else { 0.0 };
        (0..sw.points).map(|k| sw.u_min * (k as f64 * step).exp()).collect()
    };
    let c = circuit(cfg, grid[0])?;
    let rows = power_scaling_sweep(&c, &grid, &settings(cfg));
    let mut t = Table::new(&["u", "p", "t1", "slope", "error"]);
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    for r in &rows {
        let err = r.error.as_ref().map(|e| e.code().to_string()).unwrap_or_default();
        t.text_row(&[num(r.u), opt(r.p), opt(r.t1), opt(r.slope), err]);
    }
    t.write(dir, "sweep.csv")?;
    let slopes: Vec<f64> = rows.iter().filter_map(|r| r.slope).collect();
    s.put("points", rows.len().to_string());
    s.put("failed", rows.iter().filter(|r| r.error.is_some()).count().to_string());
    if !slopes.is_empty() {
        s.num("slope_min", slopes.iter().copied().fold(f64::INFINITY, f64::min));
        s.num("slope_max", slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    }
    Ok(())
}

pub fn powerlaw_loop(cfg: &Config, dir: &Path, s: &mut Summary) -> Result<(), CliError> {
    let p = &cfg.powerlaw;
    let e = PowerLawHysteresisElement::new(
        PowerLawBranch::new(p.d_rising, p.alpha_rising)?,
        PowerLawBranch::new(p.d_falling, p.alpha_falling)?,
    );
    let (ir, vr) = powerlaw_return_point(&e)?;
    s.num("return_point_i", ir);
    s.num("return_point_v", vr);
    let mut rp = Table::new(&["i", "v"]);
    rp.row(&[ir, vr]);
    rp.write(dir, "return_point.csv")?;
    let rows = frequency_dependence_study(&StudyElement::PowerLaw(e), p.amplitude, &p.omegas, p.points, Exec::default())?;
    for (k, r) in rows.iter().enumerate() {
        s.num(format!("omega_{k}"), r.omega);
        s.num(format!("area_{k}"), r.area);
        s.put(format!("class_{k}"), r.class.label());
        let mut t = Table::new(&["i", "v"]);
        r.points.iter().for_each(|(i, v)| t.row(&[*i, *v]));
        t.write(dir, &format!("loop_{k}.csv"))?;
    }
    Ok(())
}

pub fn memristor_demo(cfg: &Config, dir: &Path, s: &mut Summary) -> Result<(), CliError> {
    let m = &cfg.memristor;
    let inst = ChargeControlledInstance::new(m.r0, m.k)?;
    if !(m.amplitude > 0.0 && m.omega > 0.0) || m.points < zcsim::signal::MIN_GRID {
        return Err(CliError::Config("memristor needs amplitude > 0, omega > 0 and enough points".into()));
    }
    inst.check_passive(0.0, 2.0 * m.amplitude / m.omega)?;
    let (amp, w) = (m.amplitude, m.omega);
    let run = memristive_response(&inst, |t| amp * (w * t).sin(), TAU / w, m.points)?;
    let lp = extract_loop(&run.current, &run.voltage)?;
    let pinched = pinch_test(&lp, 1e-9 * run.voltage.max_abs());
    s.put("pinched", pinched.to_string());
    s.put("loop_class", classify_loop(&lp).label());
    s.num("loop_area", lp.area());
    let mut t = Table::new(&["i", "v"]);
    lp.points.iter().for_each(|(i, v)| t.row(&[*i, *v]));
    t.write(dir, "loop.csv")?;

    let fc = flux_charge(&run.current, &run.voltage, cfg.output.periods)?;
    let mut t = Table::new(&["t", "q", "psi", "psi_model"]);
    let mut worst = 0.0f64;
    let scale = fc.psi.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    for (k, (q, psi)) in fc.q.iter().zip(&fc.psi).enumerate() {
        let model = inst.flux_of_charge(*q);
        worst = worst.max((psi - model).abs());
        t.row(&[k as f64 * fc.step, *q, *psi, model]);
    }
    t.write(dir, "psi_q.csv")?;
    s.num("psi_q_max_rel_error", if scale > 0.0 { worst / scale } else { worst });
    Ok(())
}

fn switched_system(cfg: &Config) -> Result<SwitchedLinearSystem, CliError> {
    let w = &cfg.switched;
    Ok(match w.fixture.as_str() {
        "stable" => stable_fixture(),
        "oscillator" => lossless_oscillator(),
        "schedule" => schedule_fixture(),
        "level" => level_fixture(),
        "chaos" => OscillatorPair {
            damping: w.damping,
            pumping: w.pumping,
            stiffness: w.stiffness,
            threshold: w.threshold,
            drive: w.drive,
            omega: w.omega,
        }
        .system()?,
        other => {
            return Err(CliError::Config(format!(
                "switched.fixture must be stable, oscillator, schedule, level or chaos, got '{other}'"
            )))
        }
    })
}

pub fn switched_chaos(cfg: &Config, dir: &Path, s: &mut Summary) -> Result<(), CliError> {
    let w = &cfg.switched;
    let sys = switched_system(cfg)?;
    let x0 = DVector::from_column_slice(&w.x0);
    let tr = simulate_switched(&sys, &x0, w.t_end, w.dt)?;
    let class = classify_switching(&sys, &tr);
    s.put("classification", class.label());
    s.put("switches", tr.switch_times.len().to_string());
    let d = sys.dim();
    let mut header: Vec<String> = vec!["t".into()];
    header.extend((1..=d).map(|k| format!("x{k}")));
    header.push("mode".into());
    let mut t = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    for ((time, x), m) in tr.times.iter().zip(&tr.states).zip(&tr.modes) {
        let mut row = vec![*time];
        row.extend(x.iter());
        row.push(*m as f64);
        t.row(&row);
    }
    t.write(dir, "trajectory.csv")?;
    if !tr.switch_times.is_empty() {
        let probe = scaling_probe(&sys, &x0, w.t_end, w.dt, 2.0)?;
        s.num("scaling_instant_shift", probe.max_instant_shift);
        s.num("scaling_state_defect", probe.state_defect);
    }
    let ls = LyapunovSettings { horizon: w.horizon, renorm_interval: w.renorm_interval, dt: w.dt, transient: w.transient };
    s.num("lambda", largest_lyapunov(&sys, &x0, &ls)?);
    Ok(())
}

pub fn poynting(cfg: &Config, s: &mut Summary) -> Result<(), CliError> {
    let p = &cfg.poynting;
    let (flow, vi) = poynting_balance(p.l, p.r, p.v, p.i)?;
    s.num("surface_flow", flow);
    s.num("vi", vi);
    s.put("identical", (flow.to_bits() == vi.to_bits()).to_string());
    Ok(())
}

fn decay_label(order: DecayOrder) -> String {
    match order {
        DecayOrder::Polynomial(m) => num(m),
        DecayOrder::SuperPolynomial => "super-polynomial".into(),
    }
}

pub fn decompose(cfg: &Config, dir: &Path, s: &mut Summary) -> Result<(), CliError> {
    let (c, st) = solve(cfg, s)?;
    let st = SteadyState { current: quantize(&st.current), ..st };
    let l = cfg.ballast.l + c.element.l_prime();
    let (i1, i2) = smooth_rough_decompose(&st, c.element.a1(), l)?;
    waveform_table(&["t", "i", "i1", "i2"], &[&st.current, &i1, &i2], 1).write(dir, "decompose.csv")?;
    waveform_table(&["t", "i"], &[&st.current], 1).write(dir, "current.csv")?;
    let sum = PeriodicWaveform::new(st.period(), i1.samples().iter().zip(i2.samples()).map(|(a, b)| a + b).collect(), i1.unit())?;
    waveform_table(&["t", "i"], &[&sum], 1).write(dir, "recombined.csv")?;
    let worst = sum.samples().iter().zip(st.current.samples()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    s.num("recombination_max_error", worst);
    let n_h = (st.current.len() / 2 - 1).min(1000);
    let n_fit = n_h.min(255);
    s.put("i1_decay_order", decay_label(coefficient_decay_order(&to_fourier(&i1, n_h)?, 3, n_fit)?));
    s.put("i2_decay_order", decay_label(coefficient_decay_order(&to_fourier(&i2, n_h)?, 3, n_fit)?));
    Ok(())
}
