use std::collections::HashMap;
use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::Command;

use tempfile::TempDir;

const FAST: [&str; 4] = ["--nh", "255", "--set", "solver.grid=1024"];

struct Run {
    ok: bool,
    stderr: String,
    summary: HashMap<String, String>,
}

impl Run {
    fn num(&self, key: &str) -> f64 {
        self.summary.get(key).unwrap_or_else(|| panic!("missing {key}")).parse().unwrap()
    }

    fn get(&self, key: &str) -> &str {
        self.summary.get(key).map(String::as_str).unwrap_or_else(|| panic!("missing {key}"))
    }
}

fn zcsim(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_zcsim"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs");
    let text = fs::read_to_string(dir.join("summary.txt")).unwrap_or_default();
    let summary = text
        .lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    Run { ok: out.status.success(), stderr: String::from_utf8_lossy(&out.stderr).into(), summary }
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn lamp_steady_pure_l_closed_form() {
    let tmp = TempDir::new().unwrap();
    let run = zcsim(tmp.path(), &[&["lamp-steady"][..], &FAST].concat());
    assert!(run.ok, "{}", run.stderr);
    let omega = 2.0 * PI * 50.0;
    let period = 2.0 * PI / omega;
    assert!((run.num("t1") - (0.5f64).acos() / omega).abs() < 1e-6 * period);
    assert_eq!(run.get("status"), "ok");
    assert!(run.num("power_identity_residual") < 1e-6);
    assert!(tmp.path().join("waveforms.csv").exists());
    assert!(tmp.path().join("loop.csv").exists());
}

#[test]
fn lamp_steady_below_threshold_fails_with_bound() {
    let tmp = TempDir::new().unwrap();
    let run = zcsim(tmp.path(), &[&["lamp-steady", "--set", "drive.u=1.5"][..], &FAST].concat());
    assert!(!run.ok);
    let err = run.get("error");
    assert!(err.starts_with("no-solution:"), "{err}");
    assert!(err.contains("A*pi/2"));
    assert!(run.stderr.contains("error = no-solution"));
    assert!(!run.summary.contains_key("status"));
}

#[test]
fn linear_circuit_power_scales_quadratically() {
    let p = |u: &str| {
        let tmp = TempDir::new().unwrap();
        let set = format!("drive.u={u}");
        let run = zcsim(
            tmp.path(),
            &[&["lamp-steady", "--set", "element.a=0", "--set", "ballast.r=50", "--set", &set][..], &FAST].concat(),
        );
        assert!(run.ok, "{}", run.stderr);
        run.num("p_source")
    };
    let ratio = p("20") / p("10");
    assert!((ratio - 4.0).abs() < 1e-9, "{ratio}");
}

#[test]
fn sweep_slopes() {
    let tmp = TempDir::new().unwrap();
    let linear = zcsim(
        tmp.path(),
        &[&["lamp-sweep", "--set", "element.a=0", "--set", "ballast.r=50", "--set", "sweep.points=5"][..], &FAST]
            .concat(),
    );
    assert!(linear.ok, "{}", linear.stderr);
    for s in column(&tmp.path().join("sweep.csv"), "slope") {
        assert!((s - 2.0).abs() < 1e-6, "{s}");
    }

    let tmp = TempDir::new().unwrap();
    let lamp = zcsim(tmp.path(), &[&["lamp-sweep", "--set", "sweep.points=6"][..], &FAST].concat());
    assert!(lamp.ok, "{}", lamp.stderr);
    let slopes = column(&tmp.path().join("sweep.csv"), "slope");
    assert!(slopes.iter().all(|s| *s > 1.0 && *s < 2.0), "{slopes:?}");
    assert!(slopes.windows(2).all(|w| w[1] < w[0]), "{slopes:?}");
}

#[test]
fn sweep_single_point_has_empty_slope() {
    let tmp = TempDir::new().unwrap();
    let run = zcsim(tmp.path(), &[&["lamp-sweep", "--set", "sweep.u=[4.0]"][..], &FAST].concat());
    assert!(run.ok, "{}", run.stderr);
    let text = fs::read_to_string(tmp.path().join("sweep.csv")).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row.len(), 5);
    assert!(row[1].parse::<f64>().unwrap() > 0.0);
    assert_eq!(row[3], "");
    assert_eq!(row[4], "");
}

#[test]
fn powerlaw_loops_are_rate_independent() {
    let tmp = TempDir::new().unwrap();
    let run = zcsim(tmp.path(), &["powerlaw-loop", "--set", "powerlaw.omegas=[1.0, 37.0]"]);
    assert!(run.ok, "{}", run.stderr);
    assert_eq!(run.num("return_point_i"), 1.0);
    assert_eq!(run.num("return_point_v"), 1.0);
    let a = fs::read(tmp.path().join("loop_0.csv")).unwrap();
    let b = fs::read(tmp.path().join("loop_1.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn powerlaw_equal_exponents_rejected() {
    let tmp = TempDir::new().unwrap();
    let run = zcsim(tmp.path(), &["powerlaw-loop", "--set", "powerlaw.alpha_falling=1.0"]);
    assert!(!run.ok);
    assert!(run.get("error").starts_with("degenerate-loop"));
}

#[test]
fn memristor_demo_pinched_and_flux_charge() {
    let tmp = TempDir::new().unwrap();
    let run = zcsim(tmp.path(), &["memristor-demo", "--periods", "2"]);
    assert!(run.ok, "{}", run.stderr);
    assert_eq!(run.get("pinched"), "true");
    assert!(run.num("psi_q_max_rel_error") < 1e-6);

    let tmp = TempDir::new().unwrap();
    let run = zcsim(tmp.path(), &["memristor-demo", "--set", "memristor.k=0", "--set", "memristor.r0=2.5"]);
    assert!(run.ok, "{}", run.stderr);
    let path = tmp.path().join("psi_q.csv");
    let (q, psi) = (column(&path, "q"), column(&path, "psi"));
    let scale = psi.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for (q, psi) in q.iter().zip(&psi) {
        assert!((psi - 2.5 * q).abs() <= 1e-14 * scale);
    }
}

#[test]
fn switched_fixtures() {
    let run_fixture = |name: &str| {
        let tmp = TempDir::new().unwrap();
        let set = format!("switched.fixture={name}");
        let run = zcsim(tmp.path(), &["switched-chaos", "--set", &set, "--set", "switched.horizon=500"]);
        assert!(run.ok, "{}", run.stderr);
        assert!(tmp.path().join("trajectory.csv").exists());
        run
    };
    assert!(run_fixture("stable").num("lambda") < 0.0);
    let chaos = run_fixture("chaos");
    assert!(chaos.num("lambda") > 0.01);
    assert_eq!(chaos.get("classification"), "NL");
    let ltv = run_fixture("schedule");
    assert_eq!(ltv.get("classification"), "LTV");
    assert_eq!(ltv.num("scaling_instant_shift"), 0.0);
}

#[test]
fn poynting_examples() {
    let tmp = TempDir::new().unwrap();
    let run = zcsim(tmp.path(), &["poynting", "--l", "3", "--r", "0.01", "--v", "5", "--i", "2"]);
    assert_eq!((run.num("surface_flow"), run.num("vi")), (10.0, 10.0));
    assert_eq!(run.get("identical"), "true");
    let run = zcsim(tmp.path(), &["poynting", "--v", "0"]);
    assert_eq!((run.num("surface_flow"), run.num("vi")), (0.0, 0.0));
    let run = zcsim(tmp.path(), &["poynting", "--l", "300", "--r", "1"]);
    assert_eq!((run.num("surface_flow"), run.num("vi")), (10.0, 10.0));
    let run = zcsim(tmp.path(), &["poynting", "--r", "-1"]);
    assert!(!run.ok);
}

#[test]
fn decompose_outputs() {
    let tmp = TempDir::new().unwrap();
    let run = zcsim(tmp.path(), &["decompose", "--set", "drive.u=4"]);
    assert!(run.ok, "{}", run.stderr);
    let order = run.num("i2_decay_order");
    assert!((1.8..=2.2).contains(&order), "{order}");
    let a = fs::read(tmp.path().join("current.csv")).unwrap();
    let b = fs::read(tmp.path().join("recombined.csv")).unwrap();
    assert_eq!(a, b);

    let tmp = TempDir::new().unwrap();
    let run = zcsim(tmp.path(), &[&["decompose", "--set", "element.a=0", "--set", "ballast.r=50"][..], &FAST].concat());
    assert!(run.ok, "{}", run.stderr);
    assert!(column(&tmp.path().join("decompose.csv"), "i2").iter().all(|x| *x == 0.0));
}

#[test]
fn runs_are_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let args = [&["lamp-steady", "--set", "element.kind=lamp", "--set", "element.l_prime=0.05"][..], &FAST].concat();
    let (ra, rb) = (zcsim(a.path(), &args), zcsim(b.path(), &args));
    assert!(ra.ok && rb.ok);
    for f in ["waveforms.csv", "loop.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
    }
}

#[test]
fn config_file_and_flags() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("run.toml");
    fs::write(&cfg, "[drive]\nu = 10.0\n\n[solver]\nn_h = 127\ngrid = 512\n").unwrap();
    let out = tmp.path().join("out");
    let cfg_arg = cfg.to_str().unwrap();
    let run = zcsim(&out, &["lamp-steady", "--config", cfg_arg, "--nh", "200"]);
    assert!(run.ok, "{}", run.stderr);
    assert_eq!(run.get("config.solver.n_h"), "200");
    assert_eq!(run.num("config.drive.u"), 10.0);
    assert_eq!(run.num("config.solver.grid"), 512.0);
    let omega = 2.0 * PI * 50.0;
    let expected = (PI / 20.0).acos() / omega;
    assert!((run.num("t1") - expected).abs() < 1e-6 / 50.0);

    let bad = zcsim(&out, &["lamp-steady", "--set", "drive.volts=3"]);
    assert!(!bad.ok);
    assert!(bad.stderr.contains("invalid-config"));
}
