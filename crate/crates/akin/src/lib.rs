//! Spectral solvers for a kinetic model of dilute active rod suspensions on `T² × S¹`.
//!
//! Swimmers with orientation `p` are advected at unit speed, rotated by the local flow
//! and diffuse in position and orientation. Their collective stress `ι ∫ p⊗p ψ dp`
//! drives a Stokes flow. The crate computes linear stability (dispersion relation and
//! threshold), per-mode linear dynamics with rate fits, and full nonlinear simulations.
//!
//! ```
//! use akin::spectral::OrientationSpectrum;
//! use num_complex::Complex64;
//!
//! let h = OrientationSpectrum::exponential(1, 8);
//! assert!((h.sobolev_norm(-1.0) - std::f64::consts::PI.sqrt()).abs() < 1e-14);
//! let flat = OrientationSpectrum::constant(Complex64::new(1.0, 0.0), 8);
//! assert_eq!(flat.laplace_beltrami().l2_norm(), 0.0);
//! ```

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dispersion;
pub mod fftgrid;
pub mod fit;
pub mod mode;
pub mod nonlinear;
pub mod params;
pub mod quadrature;
pub mod spectral;
pub mod stokes;

pub use params::{Dimension, ModelParams, Swimmer};
pub use spectral::OrientationSpectrum;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/stokes.md")]
    mod stokes {}
    #[doc = include_str!("../../../book/src/dispersion.md")]
    mod dispersion {}
    #[doc = include_str!("../../../book/src/mode-dynamics.md")]
    mod mode_dynamics {}
    #[doc = include_str!("../../../book/src/nonlinear.md")]
    mod nonlinear {}
}
