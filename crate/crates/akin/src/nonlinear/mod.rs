//! Pseudo-spectral solver for the full Smoluchowski–Stokes system on `T² × S¹`:
//! `∂_tψ + p·∇ψ + u·∇ψ + ∂_θ(gψ) = ν∂²_θψ + κΔψ`, with `g = p^⊥·(∇u)p` and `u`
//! the Stokes flow driven by `Σ = ι ∫ p⊗p ψ dθ`.
//!
//! Diffusion and swimming are advanced by Crank–Nicolson, one tridiagonal solve per
//! wavevector. Advection and the Jeffery rotation are evaluated in conservative form on
//! the grid and advanced by Heun's method. The 2/3 rule is applied in all three indices.

mod diagnostics;
mod field;
mod snapshot;
mod solver;

pub use diagnostics::{
    diagnostics, entropy, entropy_rates, h_theorem_residuals, mode_split, Diagnostics, Entropy,
    ModeSplit, ENTROPY_FLOOR,
};
pub use field::{init_field, Field2D, Grid, InitKind, RANDOM_SMOOTH_BAND};
pub use snapshot::{read_snapshot, write_snapshot, SNAPSHOT_MAGIC};
pub use solver::{flow, run, run_observed, Flow, SimTrajectory, Simulator};

use thiserror::Error;

use crate::params::ParamError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("grid sizes must be powers of two and at least 4, got {0}")]
    GridSize(usize),
    #[error("expected {expected} values, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("value {0} is not finite")]
    NonFinite(usize),
    #[error("amplitude must be finite and nonnegative, got {0}")]
    Amplitude(f64),
    #[error("background density must be finite and nonnegative, got {0}")]
    PsiBar(f64),
    #[error("field background {field} differs from the model's {params}")]
    PsiBarMismatch { field: f64, params: f64 },
    #[error("a single mode perturbation needs (k, m) != 0")]
    MeanMode,
    #[error("mode k = {k:?}, m = {m} is removed by dealiasing on this grid")]
    Unresolved { k: [i64; 2], m: i64 },
    #[error("initial density has minimum {0} < 0")]
    NegativeInit(f64),
    #[error("nonlinear runs need κ > 0")]
    Kappa,
    #[error("nonlinear runs are implemented for d = 2 only")]
    Dimension,
    #[error("time step must be finite and positive, got {0}")]
    TimeStep(f64),
    #[error("time step {dt} exceeds the CFL limit {limit} at t = {t}")]
    CflViolation { t: f64, dt: f64, limit: f64 },
    #[error("perturbation norm {norm:e} exceeded the blow-up bound at t = {t}")]
    BlowupDetected { t: f64, norm: f64 },
    #[error("snapshot: {0}")]
    Snapshot(String),
}
