use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::{Table, Value};
use zcsim::switched::CHAOS_FIXTURE;

use crate::CliError;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub element: ElementSpec,
    pub ballast: BallastSpec,
    pub drive: DriveSpec,
    pub solver: SolverSpec,
    pub sweep: SweepSpec,
    pub powerlaw: PowerLawSpec,
    pub memristor: MemristorSpec,
    pub switched: SwitchedSpec,
    pub poynting: PoyntingSpec,
    pub output: OutputSpec,
}

/// `kind` is `sign`, `lamp` or `short`; `a = 0` always means `short`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ElementSpec {
    pub kind: String,
    pub a: f64,
    pub l_prime: f64,
}

impl Default for ElementSpec {
    fn default() -> Self {
        Self { kind: "sign".into(), a: 1.0, l_prime: 0.0 }
    }
}

/// Series R-L-C ballast; `c = 0` means no capacitor.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BallastSpec {
    pub r: f64,
    pub l: f64,
    pub c: f64,
}

impl Default for BallastSpec {
    fn default() -> Self {
        Self { r: 0.0, l: 1.0, c: 0.0 }
    }
}

/// `v_in = u · Σ harmonics[k] sin((k+1)ωt)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriveSpec {
    pub u: f64,
    pub omega: f64,
    pub harmonics: Vec<f64>,
}

impl Default for DriveSpec {
    fn default() -> Self {
        Self { u: PI, omega: 2.0 * PI * 50.0, harmonics: vec![1.0] }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSpec {
    pub n_h: usize,
    pub tol: f64,
    pub grid: usize,
}

impl Default for SolverSpec {
    fn default() -> Self {
        let s = zcsim::solver::SolverSettings::default();
        Self { n_h: s.n_h, tol: s.tol, grid: s.grid }
    }
}

/// Explicit `u` list, or `points` log-spaced values in `[u_min, u_max]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub u: Vec<f64>,
    pub u_min: f64,
    pub u_max: f64,
    pub points: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self { u: vec![], u_min: 2.0, u_max: 50.0, points: 9 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PowerLawSpec {
    pub d_rising: f64,
    pub alpha_rising: f64,
    pub d_falling: f64,
    pub alpha_falling: f64,
    pub amplitude: f64,
    pub omegas: Vec<f64>,
    pub points: usize,
}

impl Default for PowerLawSpec {
    fn default() -> Self {
        Self {
            d_rising: 1.0,
            alpha_rising: 1.0,
            d_falling: 1.0,
            alpha_falling: 2.0,
            amplitude: 1.0,
            omegas: vec![1.0, 10.0],
            points: 1024,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MemristorSpec {
    pub r0: f64,
    pub k: f64,
    pub amplitude: f64,
    pub omega: f64,
    pub points: usize,
}

impl Default for MemristorSpec {
    fn default() -> Self {
        Self { r0: 1.0, k: 1.0, amplitude: 1.0, omega: 1.0, points: 4096 }
    }
}

/// `fixture` is `stable`, `oscillator`, `schedule`, `level` or `chaos`; the
/// pair parameters apply to `chaos`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SwitchedSpec {
    pub fixture: String,
    pub x0: Vec<f64>,
    pub t_end: f64,
    pub dt: f64,
    pub horizon: f64,
    pub renorm_interval: f64,
    pub transient: f64,
    pub damping: f64,
    pub pumping: f64,
    pub stiffness: f64,
    pub threshold: f64,
    pub drive: f64,
    pub omega: f64,
}

impl Default for SwitchedSpec {
    fn default() -> Self {
        let p = CHAOS_FIXTURE;
        Self {
            fixture: "chaos".into(),
            x0: vec![0.1, 0.0],
            t_end: 100.0,
            dt: 0.01,
            horizon: 1000.0,
            renorm_interval: 1.0,
            transient: 100.0,
            damping: p.damping,
            pumping: p.pumping,
            stiffness: p.stiffness,
            threshold: p.threshold,
            drive: p.drive,
            omega: p.omega,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PoyntingSpec {
    pub l: f64,
    pub r: f64,
    pub v: f64,
    pub i: f64,
}

impl Default for PoyntingSpec {
    fn default() -> Self {
        Self { l: 3.0, r: 0.01, v: 5.0, i: 2.0 }
    }
}

/// `periods` is the number of periods written to waveform files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: String,
    pub periods: usize,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: "zcsim-out".into(), periods: 1 }
    }
}

/// Parses a `--set` value as a TOML literal, falling back to a bare string.
fn parse_literal(raw: &str) -> Value {
    match format!("v = {raw}").parse::<Table>() {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => Value::String(raw.to_string()),
    }
}

/// Sets `section.key` in a raw table.
pub fn set_path(table: &mut Table, path: &str, value: Value) -> Result<(), CliError> {
    let (section, key) = path
        .split_once('.')
        .filter(|(s, k)| !s.is_empty() && !k.is_empty() && !k.contains('.'))
        .ok_or_else(|| CliError::Config(format!("override '{path}' must look like section.key")))?;
    let entry = table.entry(section).or_insert_with(|| Value::Table(Table::new()));
    let sub = entry
        .as_table_mut()
        .ok_or_else(|| CliError::Config(format!("'{section}' is not a section")))?;
    sub.insert(key.to_string(), value);
    Ok(())
}

/// Flag values that override the file.
#[derive(Debug, Default)]
pub struct Overrides {
    pub out: Option<String>,
    pub n_h: Option<usize>,
    pub tol: Option<f64>,
    pub periods: Option<usize>,
    pub set: Vec<String>,
    pub extra: Vec<(&'static str, Value)>,
}

pub fn load(path: Option<&Path>, o: &Overrides) -> Result<Config, CliError> {
    let mut table = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            text.parse::<Table>().map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
        None => Table::new(),
    };
    for item in &o.set {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--set '{item}' must look like section.key=value")))?;
        set_path(&mut table, k.trim(), parse_literal(v.trim()))?;
    }
    if let Some(n) = o.n_h {
        set_path(&mut table, "solver.n_h", Value::Integer(n as i64))?;
    }
    if let Some(t) = o.tol {
        set_path(&mut table, "solver.tol", Value::Float(t))?;
    }
    if let Some(p) = o.periods {
        set_path(&mut table, "output.periods", Value::Integer(p as i64))?;
    }
    if let Some(d) = &o.out {
        set_path(&mut table, "output.dir", Value::String(d.clone()))?;
    }
    for (k, v) in &o.extra {
        set_path(&mut table, k, v.clone())?;
    }
    let cfg: Config = table.try_into().map_err(|e: toml::de::Error| CliError::Config(e.message().to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

impl Config {
    fn validate(&self) -> Result<(), CliError> {
        let bad = self.echo().into_iter().find(|(_, v)| v.contains("NaN") || v.contains("inf"));
        if let Some((k, v)) = bad {
            return Err(CliError::Config(format!("{k} must be finite, got {v}")));
        }
        if self.output.periods == 0 {
            return Err(CliError::Config("output.periods must be at least 1".into()));
        }
        Ok(())
    }

    /// Every resolved setting as `section.key`, value pairs in file order.
    pub fn echo(&self) -> Vec<(String, String)> {
        let table = Table::try_from(self).expect("config serializes");
        let mut out = Vec::new();
        for (section, body) in &table {
            if let Value::Table(t) = body {
                for (k, v) in t {
                    out.push((format!("{section}.{k}"), render(v)));
                }
            }
        }
        out
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::Float(x) => crate::output::num(*x),
        Value::Array(items) => format!("[{}]", items.iter().map(render).collect::<Vec<_>>().join(", ")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_values() {
        let dir = std::env::temp_dir().join(format!("zcsim-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "[solver]\nn_h = 100\ntol = 1e-6\n[drive]\nu = 4.0\n").unwrap();
        let o = Overrides { n_h: Some(255), set: vec!["drive.u=5".into(), "element.kind=lamp".into()], ..Default::default() };
        let cfg = load(Some(&path), &o).unwrap();
        assert_eq!(cfg.solver.n_h, 255);
        assert_eq!(cfg.solver.tol, 1e-6);
        assert_eq!(cfg.drive.u, 5.0);
        assert_eq!(cfg.element.kind, "lamp");
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let o = Overrides { set: vec!["drive.volts=3".into()], ..Default::default() };
        assert!(load(None, &o).is_err());
        let o = Overrides { set: vec!["nodot=3".into()], ..Default::default() };
        assert!(load(None, &o).is_err());
    }

    #[test]
    fn echo_round_trips() {
        let cfg = Config::default();
        let text: String = cfg
            .echo()
            .iter()
            .map(|(k, v)| {
                let quoted = if v.parse::<f64>().is_ok() || v.starts_with('[') { v.clone() } else { format!("\"{v}\"") };
                format!("{k}={quoted}\n")
            })
            .collect();
        let mut t = Table::new();
        for line in text.lines() {
            let (k, v) = line.split_once('=').unwrap();
            set_path(&mut t, k, parse_literal(v)).unwrap();
        }
        let back: Config = t.try_into().unwrap();
        assert_eq!(back.echo(), cfg.echo());
    }
}
