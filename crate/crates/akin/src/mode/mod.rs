//! Linearized dynamics of a single spatial Fourier mode in the plane.

mod evolver;
mod hypo;
mod moments;
mod poincare;
mod rates;

pub use evolver::{
    evolve_mode, heat_flow, ModeSample, ModeStepper, ModeTrajectory, Schedule, BLOWUP_FACTOR,
};
pub use hypo::{hypo_coefficients, hypo_phi, phi_bounds, HypoCoefficients, ScaledCoefficients};
pub use moments::{guo_functional, guo_slack, moments, Moments};
pub use poincare::{estimate_poincare_c0, poincare_extremal, sweep_poincare_c0, PoincareEstimate};
pub use rates::{
    check_envelope, enhanced_rate, enhanced_rate_with, lambda_nu, lambda_nu_k, mu_nu_k,
    psibar_bound, psibar_linear_enhancement, smoothing_budget, taylor_rate, taylor_rate_with,
    EnhancedFit, RateOptions,
};

use thiserror::Error;

use crate::fit::FitError;
use crate::params::ParamError;
use crate::spectral::SpectrumError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModeError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error("wavenumber must be finite and nonnegative, got {0}")]
    Wavenumber(f64),
    #[error("time step {dt} exceeds 0.5/k at k = {k}")]
    TimeStep { dt: f64, k: f64 },
    #[error("norm exceeded the blow-up bound at t = {t}")]
    StabilityViolation { t: f64 },
    #[error("decay envelope violated at t = {t}")]
    EnvelopeViolation { t: f64 },
    #[error("power iteration stalled with residual {residual:e}")]
    NonConvergence { residual: f64 },
    #[error("fit window starts at {start} but the run ends at {end}")]
    Window { start: f64, end: f64 },
    #[error("ψ̄ = {psi_bar} exceeds the admissible bound {bound}")]
    PsiBarAboveBound { psi_bar: f64, bound: f64 },
    #[error("orientation dynamics are implemented for d = 2 only")]
    Dimension,
    #[error("Poincaré estimate needs 0 < ν < k, got ν = {nu}, k = {k}")]
    PoincareRange { nu: f64, k: f64 },
    #[error("HypoCoefficients need c0 > 0, got {0}")]
    C0(f64),
}
