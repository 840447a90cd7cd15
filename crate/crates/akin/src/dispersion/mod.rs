//! Linear stability of the isotropic state and phase mixing of a single spatial mode.
//!
//! For a mode `k = e₁` the perturbation obeys a Volterra equation whose Laplace-side
//! characteristic function is `1 + ι d ψ̄ γ₂(λ)`. Its zeros in `Re λ >= 0` are unstable
//! eigenvalues; pushers acquire them above a concentration threshold `ψ*`.

mod gamma;
mod roots;
mod transport;
mod volterra;

pub use gamma::{
    fourth_moment, gamma_j, GammaEvaluation, GammaRegime, BOUNDARY_OFFSETS, BOUNDARY_TOLERANCE,
};
pub use roots::{
    dispersion_report, find_roots, penrose_threshold, DispersionReport, Root, SearchBox,
    SearchStats, Threshold, DEDUP_DISTANCE, ROOT_RESIDUAL, THRESHOLD_BRACKET, THRESHOLD_WIDTH,
};
pub use transport::{
    density_moment, density_moment_sphere, free_transport, free_transport_decay,
    free_transport_decay_over, free_transport_norms,
};
pub use volterra::{
    circle_nodes, duhamel_remainder, duhamel_remainder_series, forcing_term, kernel_k,
    kernel_samples, volterra_solve, CircleMoment, Forcing, VolterraTrajectory, MAX_DT,
};

use num_complex::Complex64;
use thiserror::Error;

use crate::fit::FitError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DispersionError {
    #[error("λ = {0} lies outside the closed right half-plane or is zero")]
    Domain(Complex64),
    #[error("index j = {j} is not an off-axis direction in dimension {d}")]
    Index { j: usize, d: u32 },
    #[error("quadrature did not converge (error estimate {0:e})")]
    Quadrature(f64),
    #[error("background concentration must be positive, got {0}")]
    PsiBar(f64),
    #[error("no change of stability in ψ̄ ∈ [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },
    #[error("time step {dt} exceeds {max}")]
    TimeStep { dt: f64, max: f64 },
    #[error("time {0} is not on the trajectory grid")]
    OffGrid(f64),
    #[error("{0}")]
    Unsupported(&'static str),
    #[error(transparent)]
    Fit(#[from] FitError),
}
