//! Nonlinear element models: the sign hardlimiter, the hysteresis lamp, the
//! power-law hysteresis pair and generic memristive systems `v = R(x,i)·i`,
//! `dx/dt = f(x,i)`.

use crate::error::{Error, Result};

/// `sign` with `sign(0) = 0`.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(Error::InvalidInput(format!("{name} must be finite and positive, got {x}")))
    }
}

/// `v = A sign(i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignHardlimiter {
    a: f64,
}

impl SignHardlimiter {
    pub fn new(a: f64) -> Result<Self> {
        Ok(Self { a: positive("A", a)? })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
}

pub fn hardlimiter_voltage(e: &SignHardlimiter, i: f64) -> f64 {
    e.a * sign(i)
}

/// Lamp with hysteresis: `v = A₁ sign(i) + L′ di/dt`, `A₁ = A(1 + 2L′/L)`
/// where `L` is the ballast inductance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HysteresisLamp {
    a: f64,
    l_prime: f64,
    l_ballast: f64,
}

impl HysteresisLamp {
    pub fn new(a: f64, l_prime: f64, l_ballast: f64) -> Result<Self> {
        let a = positive("A", a)?;
        if !(l_prime.is_finite() && l_prime >= 0.0) {
            return Err(Error::InvalidInput(format!("L' must be >= 0, got {l_prime}")));
        }
        let l_ballast = positive("ballast L", l_ballast)?;
        Ok(Self { a, l_prime, l_ballast })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn l_prime(&self) -> f64 {
        self.l_prime
    }

    pub fn l_ballast(&self) -> f64 {
        self.l_ballast
    }

    /// Effective switching level `A₁ = A(1 + 2L′/L)`.
    pub fn a1(&self) -> f64 {
        self.a * (1.0 + 2.0 * self.l_prime / self.l_ballast)
    }
}

pub fn lamp_voltage(e: &HysteresisLamp, i: f64, didt: f64) -> f64 {
    e.a1() * sign(i) + e.l_prime * didt
}

/// `W = L′ i² / 2`.
pub fn stored_inductive_energy(e: &HysteresisLamp, i: f64) -> f64 {
    0.5 * e.l_prime * i * i
}

/// One branch `v = D |i|^α sign(i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawBranch {
    pub d: f64,
    pub alpha: f64,
}

impl PowerLawBranch {
    pub fn new(d: f64, alpha: f64) -> Result<Self> {
        Ok(Self { d: positive("D", d)?, alpha: positive("alpha", alpha)? })
    }

    /// Branch through `(i_o, v_o)`: `D = v_o / i_o^α`.
    pub fn through(i_o: f64, v_o: f64, alpha: f64) -> Result<Self> {
        let (i_o, v_o, alpha) = (positive("i_o", i_o)?, positive("v_o", v_o)?, positive("alpha", alpha)?);
        Self::new(v_o / i_o.powf(alpha), alpha)
    }

    pub fn voltage(&self, i: f64) -> f64 {
        self.d * i.abs().powf(self.alpha) * sign(i)
    }

    /// Inverse map `i(v) = (|v|/D)^{1/α} sign(v)`.
    pub fn current(&self, v: f64) -> f64 {
        (v.abs() / self.d).powf(1.0 / self.alpha) * sign(v)
    }

    /// `dv/di = D α |i|^{α-1}`.
    pub fn slope(&self, i: f64) -> f64 {
        self.d * self.alpha * i.abs().powf(self.alpha - 1.0)
    }
}

/// Rate-dependent selection between two power-law branches: `rising` while
/// `di/dt > 0`, `falling` while `di/dt < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawHysteresisElement {
    pub rising: PowerLawBranch,
    pub falling: PowerLawBranch,
}

impl PowerLawHysteresisElement {
    pub fn new(rising: PowerLawBranch, falling: PowerLawBranch) -> Self {
        Self { rising, falling }
    }

    pub fn branch(&self, didt_sign: f64) -> Result<&PowerLawBranch> {
        if didt_sign > 0.0 {
            Ok(&self.rising)
        } else if didt_sign < 0.0 {
            Ok(&self.falling)
        } else {
            Err(Error::AmbiguousBranch)
        }
    }
}

pub fn powerlaw_voltage(e: &PowerLawHysteresisElement, i: f64, didt_sign: f64) -> Result<f64> {
    Ok(e.branch(didt_sign)?.voltage(i))
}

/// Branch intersection `(i_r, v_r)` for `i > 0`.
pub fn powerlaw_return_point(e: &PowerLawHysteresisElement) -> Result<(f64, f64)> {
    let (r, f) = (e.rising, e.falling);
    if r.alpha == f.alpha {
        return Err(Error::DegenerateLoop(r.alpha));
    }
    let i_r = match r.alpha - f.alpha {
        -1.0 => r.d / f.d,
        1.0 => f.d / r.d,
        gap => (f.d / r.d).powf(1.0 / gap),
    };
    Ok((i_r, r.d * i_r.powf(r.alpha)))
}

/// A memristive one-port `v = R(x, i) i`, `dx/dt = f(x, i)` with a
/// `state_dim`-dimensional internal state.
pub trait MemristiveSystem {
    fn state_dim(&self) -> usize;
    fn initial_state(&self) -> Vec<f64>;
    fn memristance(&self, x: &[f64], i: f64) -> f64;
    fn state_rate(&self, x: &[f64], i: f64) -> Vec<f64>;
}

pub fn memristive_voltage<M: MemristiveSystem + ?Sized>(m: &M, x: &[f64], i: f64) -> Result<f64> {
    if x.len() != m.state_dim() {
        return Err(Error::DimensionMismatch { expected: m.state_dim(), got: x.len() });
    }
    let r = m.memristance(x, i);
    if !r.is_finite() {
        return Err(Error::ModelDomain(format!("memristance {r} at x = {x:?}, i = {i}")));
    }
    Ok(if i == 0.0 { 0.0 } else { r * i })
}

pub fn memristive_state_rate<M: MemristiveSystem + ?Sized>(m: &M, x: &[f64], i: f64) -> Result<Vec<f64>> {
    if x.len() != m.state_dim() {
        return Err(Error::DimensionMismatch { expected: m.state_dim(), got: x.len() });
    }
    let rate = m.state_rate(x, i);
    if rate.len() != m.state_dim() {
        return Err(Error::DimensionMismatch { expected: m.state_dim(), got: rate.len() });
    }
    if rate.iter().any(|r| !r.is_finite()) {
        return Err(Error::ModelDomain(format!("non-finite state rate at x = {x:?}, i = {i}")));
    }
    Ok(rate)
}

/// Charge-controlled memristor: state `q`, `dq/dt = i`, `R(q) = R0 + k q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeControlledInstance {
    pub r0: f64,
    pub k: f64,
    pub q0: f64,
}

impl ChargeControlledInstance {
    pub fn new(r0: f64, k: f64) -> Result<Self> {
        let r0 = positive("R0", r0)?;
        if !k.is_finite() {
            return Err(Error::InvalidInput(format!("k must be finite, got {k}")));
        }
        Ok(Self { r0, k, q0: 0.0 })
    }

    /// Checks `R0 + k q > 0` on `[q_min, q_max]`.
    pub fn check_passive(&self, q_min: f64, q_max: f64) -> Result<()> {
        let worst = (self.r0 + self.k * q_min).min(self.r0 + self.k * q_max);
        if worst > 0.0 {
            Ok(())
        } else {
            Err(Error::ModelDomain(format!(
                "memristance reaches {worst} on charge range [{q_min}, {q_max}]"
            )))
        }
    }

    /// Flux as a function of charge, `ψ(q) = R0 q + k q²/2` (with `ψ(0) = 0`).
    pub fn flux_of_charge(&self, q: f64) -> f64 {
        self.r0 * q + 0.5 * self.k * q * q
    }
}

impl MemristiveSystem for ChargeControlledInstance {
    fn state_dim(&self) -> usize {
        1
    }

    fn initial_state(&self) -> Vec<f64> {
        vec![self.q0]
    }

    fn memristance(&self, x: &[f64], _i: f64) -> f64 {
        self.r0 + self.k * x[0]
    }

    fn state_rate(&self, _x: &[f64], i: f64) -> Vec<f64> {
        vec![i]
    }
}

type RFn = dyn Fn(&[f64], f64) -> f64 + Send + Sync;
type FFn = dyn Fn(&[f64], f64) -> Vec<f64> + Send + Sync;

/// Memristive system assembled from closures.
pub struct FnMemristive {
    dim: usize,
    x0: Vec<f64>,
    r: Box<RFn>,
    f: Box<FFn>,
}

impl FnMemristive {
    pub fn new(
        x0: Vec<f64>,
        r: impl Fn(&[f64], f64) -> f64 + Send + Sync + 'static,
        f: impl Fn(&[f64], f64) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        if x0.is_empty() {
            return Err(Error::InvalidInput("state dimension must be at least 1".into()));
        }
        Ok(Self { dim: x0.len(), x0, r: Box::new(r), f: Box::new(f) })
    }
}

impl MemristiveSystem for FnMemristive {
    fn state_dim(&self) -> usize {
        self.dim
    }

    fn initial_state(&self) -> Vec<f64> {
        self.x0.clone()
    }

    fn memristance(&self, x: &[f64], i: f64) -> f64 {
        (self.r)(x, i)
    }

    fn state_rate(&self, x: &[f64], i: f64) -> Vec<f64> {
        (self.f)(x, i)
    }
}
