use super::{steady_state_two_crossing, LampCircuit, SolverSettings};
use crate::analysis::average_power;
use crate::error::{Error, Result};
use crate::exec::Exec;

/// One row of a drive-amplitude sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub u: f64,
    /// Source power `⟨v_in i⟩`.
    pub p: Option<f64>,
    pub t1: Option<f64>,
    /// Local `d ln P / d ln U`.
    pub slope: Option<f64>,
    pub error: Option<Error>,
}

pub fn power_scaling_sweep(c: &LampCircuit, u_grid: &[f64], s: &SolverSettings) -> Vec<SweepRow> {
    power_scaling_sweep_with(c, u_grid, s, Exec::default())
}

/// Solves the circuit at each drive scale and reports power and its local
/// log-log slope (centered where both neighbors solved, one-sided at gaps).
pub fn power_scaling_sweep_with(c: &LampCircuit, u_grid: &[f64], s: &SolverSettings, exec: Exec) -> Vec<SweepRow> {
    let solved: Vec<Result<(f64, Option<f64>)>> = exec.map(u_grid, |&u| {
        let st = steady_state_two_crossing(&c.with_u(u)?, s)?;
        Ok((average_power(&st.current, &st.source)?, st.t1()))
    });
    let logs: Vec<Option<(f64, f64)>> = u_grid
        .iter()
        .zip(&solved)
        .map(|(&u, r)| match r {
            Ok((p, _)) if *p > 0.0 => Some((u.ln(), p.ln())),
            _ => None,
        })
        .collect();
    let n = u_grid.len();
    (0..n)
        .map(|j| {
            let left = j.checked_sub(1).and_then(|k| logs[k]);
            let right = logs.get(j + 1).copied().flatten();
            let slope = match (left, logs[j], right) {
                (Some(a), Some(_), Some(b)) => Some((b.1 - a.1) / (b.0 - a.0)),
                (Some(a), Some(m), None) => Some((m.1 - a.1) / (m.0 - a.0)),
                (None, Some(m), Some(b)) => Some((b.1 - m.1) / (b.0 - m.0)),
                _ => None,
            };
            let (p, t1, error) = match &solved[j] {
                Ok((p, t1)) => (Some(*p), *t1, None),
                Err(e) => (None, None, Some(e.clone())),
            };
            SweepRow { u: u_grid[j], p, t1, slope, error }
        })
        .collect()
}
