//! `zcsim` command-line front end: one scenario per subcommand, CSV tables
//! and a `summary.txt` record in the output directory.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toml::Value;

use config::Overrides;
use output::Summary;

#[derive(Parser)]
#[command(name = "zcsim", version, about = "Zero-crossing circuit scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML file with [element], [ballast], [drive], [solver], ... sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, global = true)]
    out: Option<String>,
    /// Number of harmonics.
    #[arg(long, global = true)]
    nh: Option<usize>,
    /// Solver tolerance, relative to the peak current.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Periods written to waveform files.
    #[arg(long, global = true)]
    periods: Option<usize>,
    /// Override any setting, e.g. `--set drive.u=5`.
    #[arg(long = "set", global = true, value_name = "SECTION.KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Two-crossing steady state of the lamp circuit.
    LampSteady,
    /// Source power against drive amplitude.
    LampSweep,
    /// Power-law hysteresis loops at several frequencies.
    PowerlawLoop,
    /// Charge-controlled memristor loop and flux-charge curve.
    MemristorDemo,
    /// Switched-linear fixture: trajectory, class and Lyapunov exponent.
    SwitchedChaos,
    /// Surface power flow of a cylindrical conductor against v·i.
    Poynting {
        #[arg(long)]
        l: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        v: Option<f64>,
        #[arg(long)]
        i: Option<f64>,
    },
    /// Smooth/rough split of the steady-state current.
    Decompose,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::LampSteady => "lamp-steady",
            Command::LampSweep => "lamp-sweep",
            Command::PowerlawLoop => "powerlaw-loop",
            Command::MemristorDemo => "memristor-demo",
            Command::SwitchedChaos => "switched-chaos",
            Command::Poynting { .. } => "poynting",
            Command::Decompose => "decompose",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Core(zcsim::Error),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Config(_) => "invalid-config",
            CliError::Io(_) => "io",
            CliError::Core(e) => e.code(),
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Config(m) | CliError::Io(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

impl From<zcsim::Error> for CliError {
    fn from(e: zcsim::Error) -> Self {
        CliError::Core(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut extra = Vec::new();
    if let Command::Poynting { l, r, v, i } = cli.command {
        for (key, val) in [("poynting.l", l), ("poynting.r", r), ("poynting.v", v), ("poynting.i", i)] {
            if let Some(x) = val {
                extra.push((key, Value::Float(x)));
            }
        }
    }
    let overrides =
        Overrides { out: cli.out, n_h: cli.nh, tol: cli.tol, periods: cli.periods, set: cli.set, extra };
    let cfg = match config::load(cli.config.as_deref(), &overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error = {}: {}", e.code(), e.message());
            return ExitCode::from(2);
        }
    };
    let dir = PathBuf::from(&cfg.output.dir);
    if let Err(e) = std::fs::create_dir_all(&dir) {
        eprintln!("error = io: {}: {e}", dir.display());
        return ExitCode::from(2);
    }

    let mut summary = Summary::default();
    summary.put("scenario", cli.command.name());
    for (k, v) in cfg.echo() {
        summary.put(format!("config.{k}"), v);
    }
    let result = match cli.command {
        Command::LampSteady => commands::lamp_steady(&cfg, &dir, &mut summary),
        Command::LampSweep => commands::lamp_sweep(&cfg, &dir, &mut summary),
        Command::PowerlawLoop => commands::powerlaw_loop(&cfg, &dir, &mut summary),
        Command::MemristorDemo => commands::memristor_demo(&cfg, &dir, &mut summary),
        Command::SwitchedChaos => commands::switched_chaos(&cfg, &dir, &mut summary),
        Command::Poynting { .. } => commands::poynting(&cfg, &mut summary),
        Command::Decompose => commands::decompose(&cfg, &dir, &mut summary),
    };
    if let Err(e) = &result {
        let line = format!("{}: {}", e.code(), e.message());
        eprintln!("error = {line}");
        summary.put("error", line);
    } else {
        summary.put("status", "ok");
    }
    let text = summary.render();
    let path = dir.join("summary.txt");
    if let Err(e) = std::fs::write(&path, &text) {
        eprintln!("error = io: {}: {e}", path.display());
        return ExitCode::from(2);
    }
    print!("{text}");
    if summary.has_error() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
