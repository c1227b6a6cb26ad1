//! Simulation and analysis of circuits with singular (switching) elements:
//! sign-function lamp models, memristive one-ports and power-law hysteresis
//! pairs, solved in periodic steady state by zerocrossing-parameterized
//! harmonic balance and cross-checked against a time-domain integrator.
//!
//! Module map:
//! - [`signal`]: periodic waveforms, trigonometric series, crossing sets, ballasts
//! - [`elements`]: element laws
//! - [`fourier`]: exact square-wave series and decay estimation
//! - [`solver`]: steady-state solvers, decomposition, sweeps
//! - [`analysis`]: hysteresis loops, power, flux–charge, field balance
//! - [`switched`]: switched-linear systems and chaos indicators

pub mod analysis;
pub mod elements;
pub mod error;
pub mod exec;
pub mod fourier;
pub mod signal;
pub mod solver;
pub mod switched;

pub use error::{Error, Result};
pub use exec::Exec;
