//! Grid sweep over the damped/pumped oscillator pair, printing the largest
//! Lyapunov exponent of every parameter set, best first.

use zcsim::switched::{chaos_fixture_x0, chaos_parameter_sweep, LyapunovSettings, OscillatorPair};
use zcsim::Exec;

fn main() {
    let mut grid = Vec::new();
    for &damping in &[0.1, 0.3] {
        for &pumping in &[0.02, 0.1] {
            for &stiffness in &[0.1, 4.0, 16.0] {
                for &threshold in &[0.0, 0.5] {
                    for &drive in &[1.0, 4.0] {
                        for &omega in &[0.6, 1.0, 1.6, 2.5] {
                            grid.push(OscillatorPair { damping, pumping, stiffness, threshold, drive, omega });
                        }
                    }
                }
            }
        }
    }
    let settings = LyapunovSettings { horizon: 500.0, dt: 0.005, ..Default::default() };
    let mut rows: Vec<_> = chaos_parameter_sweep(&grid, &chaos_fixture_x0(), &settings, Exec::default())
        .into_iter()
        .filter_map(|(p, r)| r.ok().map(|l| (p, l)))
        .collect();
    rows.sort_by(|a, b| b.1.total_cmp(&a.1));
    println!("{} of {} runs bounded", rows.len(), grid.len());
    for (p, l) in rows.iter().take(15) {
        println!("{l:+.5}  {p:?}");
    }
}
