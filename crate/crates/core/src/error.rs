use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Variants are grouped by the layer that raises them; [`Error::code`] gives a
/// stable machine-readable tag for each.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("harmonic count {n_h} too large for a grid of {n} samples (need n_h < n/2)")]
    TooManyHarmonics { n_h: usize, n: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("inconsistent crossings: {0}")]
    InconsistentCrossings(String),

    #[error("ballast has no finite nonzero asymptotic inductance: {0}")]
    NoAsymptoticInductance(String),

    #[error("power-law branches are degenerate (alpha1 == alpha2 == {0}); no isolated return point")]
    DegenerateLoop(f64),

    #[error("branch selection is ambiguous at di/dt = 0; the caller must carry the last slope sign")]
    AmbiguousBranch,

    #[error("model domain error: {0}")]
    ModelDomain(String),

    #[error("state dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("no two-crossing steady state: {0}")]
    NoSolution(String),

    #[error("two-crossing assumption violated: realized waveform has {realized} crossings per period; use the multi-crossing solver")]
    AssumptionViolated { realized: usize },

    #[error("multiple self-consistent crossing instants found at {0:?}")]
    MultipleRoots(Vec<f64>),

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    Divergence { iterations: usize, residual: f64 },

    #[error("crossing count mismatch: assumed {assumed}, realized {realized}")]
    CrossingCountMismatch { assumed: usize, realized: usize },

    #[error("transient did not settle within {periods} periods (last difference {difference:e})")]
    NotSettled { periods: usize, difference: f64 },

    #[error("admittance is singular at harmonic {0}")]
    Resonance(usize),

    #[error("step too large: {0}")]
    StepTooLarge(String),

    #[error("switching exceeded {0} events (Zeno guard)")]
    Zeno(usize),

    #[error("trajectory escaped: state magnitude {0} exceeds the bound")]
    Unbounded(f64),

    #[error("too few points: {0}")]
    TooFewPoints(String),
}

impl Error {
    /// Short kebab-case tag used in machine-readable error records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::GridMismatch(_) => "grid-mismatch",
            Error::TooManyHarmonics { .. } => "too-many-harmonics",
            Error::DegenerateInput(_) => "degenerate-input",
            Error::InconsistentCrossings(_) => "inconsistent-crossings",
            Error::NoAsymptoticInductance(_) => "no-asymptotic-inductance",
            Error::DegenerateLoop(_) => "degenerate-loop",
            Error::AmbiguousBranch => "ambiguous-branch",
            Error::ModelDomain(_) => "model-domain",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::NoSolution(_) => "no-solution",
            Error::AssumptionViolated { .. } => "assumption-violated",
            Error::MultipleRoots(_) => "multiple-roots",
            Error::Divergence { .. } => "divergence",
            Error::CrossingCountMismatch { .. } => "crossing-count-mismatch",
            Error::NotSettled { .. } => "not-settled",
            Error::Resonance(_) => "resonance",
            Error::StepTooLarge(_) => "step-too-large",
            Error::Zeno(_) => "zeno",
            Error::Unbounded(_) => "unbounded",
            Error::TooFewPoints(_) => "too-few-points",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
