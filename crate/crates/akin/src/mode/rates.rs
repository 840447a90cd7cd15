//! Decay-rate measurements and the decay envelopes they are compared against.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{evolve_mode, HypoCoefficients, ModeError, ModeTrajectory, Schedule};
use crate::fit::{fit_exponential, RateFit};
use crate::params::{Dimension, ModelParams};
use crate::spectral::OrientationSpectrum;

type C = Complex64;

/// `ν^{1/2}k^{1/2}/(1 + |log ν| + log k)`.
pub fn lambda_nu_k(nu: f64, k: f64) -> f64 {
    (nu * k).sqrt() / (1.0 + nu.ln().abs() + k.ln())
}

/// `λ_{ν,1}`.
pub fn lambda_nu(nu: f64) -> f64 {
    lambda_nu_k(nu, 1.0)
}

/// `ν` for `k ≥ ν`, else `k²/ν`.
pub fn mu_nu_k(nu: f64, k: f64) -> f64 {
    if k >= nu {
        nu
    } else {
        k * k / nu
    }
}

/// Numerical settings shared by the rate experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateOptions {
    /// Orientation truncation `M`.
    pub order: usize,
    /// Defaults to `min(0.2, 0.25/k)`.
    pub dt: Option<f64>,
    /// Approximate number of recorded samples.
    pub samples: usize,
    /// Replaces the experiment's default initial datum.
    pub initial: Option<OrientationSpectrum>,
}

impl Default for RateOptions {
    fn default() -> Self {
        Self {
            order: 128,
            dt: None,
            samples: 2000,
            initial: None,
        }
    }
}

impl RateOptions {
    fn schedule(&self, k: f64, t_end: f64) -> Schedule {
        let dt = self.dt.unwrap_or_else(|| 0.2f64.min(0.25 / k));
        let steps = (t_end / dt).round() as usize;
        Schedule::new(t_end, dt, (steps / self.samples.max(1)).max(1))
    }

    fn initial_or(&self, f: impl Fn(f64) -> C) -> OrientationSpectrum {
        match &self.initial {
            Some(h) => h.resized(self.order),
            None => OrientationSpectrum::from_fn(self.order, f),
        }
    }
}

fn fit_tail(traj: &ModeTrajectory, start: f64, t_end: f64) -> Result<RateFit, ModeError> {
    if start >= t_end {
        return Err(ModeError::Window { start, end: t_end });
    }
    Ok(fit_exponential(
        &traj.times(),
        &traj.norms(),
        (start, t_end),
    )?)
}

fn require_planar(params: &ModelParams) -> Result<(), ModeError> {
    match params.d {
        Dimension::Two => Ok(()),
        Dimension::Three => Err(ModeError::Dimension),
    }
}

/// Decay rate of `‖h‖` from `h_in = 1 + e^{iθ}` after the diffusive transient `t ≥ 3/ν`.
pub fn taylor_rate(params: &ModelParams, k: f64, t_end: f64) -> Result<RateFit, ModeError> {
    taylor_rate_with(params, k, t_end, &RateOptions::default())
}

pub fn taylor_rate_with(
    params: &ModelParams,
    k: f64,
    t_end: f64,
    opts: &RateOptions,
) -> Result<RateFit, ModeError> {
    require_planar(params)?;
    let h_in = opts.initial_or(|t| 1.0 + C::from_polar(1.0, t));
    let traj = evolve_mode(params, k, &h_in, &opts.schedule(k, t_end))?;
    fit_tail(&traj, 3.0 / params.nu, t_end)
}

/// An enhanced-dissipation measurement with its comparison ratios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnhancedFit {
    pub fit: RateFit,
    /// `λ_{ν,k}`.
    pub lambda: f64,
    /// Decay rate over `λ_{ν,k}`.
    pub ratio_lambda: f64,
    /// Decay rate over `√(νk)`.
    pub ratio_sqrt: f64,
}

/// Decay rate of `‖h‖` from `h_in = cos θ + sin 2θ` after `t ≥ 3/λ_{ν,k}`.
pub fn enhanced_rate(params: &ModelParams, k: f64, t_end: f64) -> Result<EnhancedFit, ModeError> {
    enhanced_rate_with(params, k, t_end, &RateOptions::default()).map(|(fit, _)| fit)
}

/// As [`enhanced_rate`], also returning the trajectory.
pub fn enhanced_rate_with(
    params: &ModelParams,
    k: f64,
    t_end: f64,
    opts: &RateOptions,
) -> Result<(EnhancedFit, ModeTrajectory), ModeError> {
    require_planar(params)?;
    let h_in = opts.initial_or(|t| C::from(t.cos() + (2.0 * t).sin()));
    let traj = evolve_mode(params, k, &h_in, &opts.schedule(k, t_end))?;
    let lambda = lambda_nu_k(params.nu, k);
    let fit = fit_tail(&traj, 3.0 / lambda, t_end)?;
    let rate = fit.decay_rate();
    let out = EnhancedFit {
        fit,
        lambda,
        ratio_lambda: rate / lambda,
        ratio_sqrt: rate / (params.nu * k).sqrt(),
    };
    Ok((out, traj))
}

/// Checks `‖h(t)‖ ≤ prefactor · e^{-rate·t} ‖h_in‖` at every sample.
pub fn check_envelope(traj: &ModeTrajectory, prefactor: f64, rate: f64) -> Result<(), ModeError> {
    let h0 = traj.initial_norm();
    match traj
        .samples
        .iter()
        .find(|s| s.norm > prefactor * (-rate * s.t).exp() * h0 * (1.0 + 1e-12))
    {
        Some(s) => Err(ModeError::EnvelopeViolation { t: s.t }),
        None => Ok(()),
    }
}

/// `λ_ν α₀ / (8 d β₀^{1/2})`.
pub fn psibar_bound(nu: f64, d: Dimension, coeffs: &HypoCoefficients) -> f64 {
    lambda_nu(nu) * coeffs.alpha0 / (8.0 * d.as_f64() * coeffs.beta0.sqrt())
}

/// Runs the `k = 1` mode with active feedback below [`psibar_bound`], checks the envelope
/// `‖f(t)‖ ≤ 2e^{-(α₀/4)λ_ν t}‖f_in‖`, and fits the decay after `t ≥ 3/λ_ν`.
pub fn psibar_linear_enhancement(
    params: &ModelParams,
    coeffs: &HypoCoefficients,
    t_end: f64,
    opts: &RateOptions,
) -> Result<RateFit, ModeError> {
    require_planar(params)?;
    let bound = psibar_bound(params.nu, params.d, coeffs);
    if params.psi_bar > bound * (1.0 + 1e-12) {
        return Err(ModeError::PsiBarAboveBound {
            psi_bar: params.psi_bar,
            bound,
        });
    }
    let h_in = opts.initial_or(|t| C::from(t.cos() + (2.0 * t).sin()));
    let traj = evolve_mode(params, 1.0, &h_in, &opts.schedule(1.0, t_end))?;
    let lambda = lambda_nu(params.nu);
    check_envelope(&traj, 2.0, 0.25 * coeffs.alpha0 * lambda)?;
    fit_tail(&traj, 3.0 / lambda, t_end)
}

/// `ν ∫₀^T e^{2cλ_ν t} ‖∂_θh‖² dt / ‖h_in‖²` by the trapezoid rule over the samples.
pub fn smoothing_budget(traj: &ModeTrajectory, c: f64) -> f64 {
    let nu = traj.params.nu;
    let rate = 2.0 * c * lambda_nu(nu);
    let integrand: Vec<f64> = traj
        .samples
        .iter()
        .map(|s| (rate * s.t).exp() * s.grad_norm * s.grad_norm)
        .collect();
    let integral: f64 = traj
        .samples
        .windows(2)
        .zip(integrand.windows(2))
        .map(|(s, f)| 0.5 * (s[1].t - s[0].t) * (f[0] + f[1]))
        .sum();
    nu * integral / traj.initial_norm().powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Swimmer;

    #[test]
    fn crossover_continuity() {
        assert_eq!(mu_nu_k(0.3, 0.3), 0.3);
        assert!((mu_nu_k(0.3, 0.3 - 1e-12) - 0.3).abs() < 1e-11);
        assert!(((0.3f64 * 0.3).sqrt() - mu_nu_k(0.3, 0.3)).abs() < 1e-15);
    }

    #[test]
    fn energy_budget_without_weight() {
        let p = ModelParams::planar(0.05, 0.0, Swimmer::Puller).unwrap();
        let h = OrientationSpectrum::from_fn(32, |t| C::from(t.cos() + (2.0 * t).sin()));
        let traj = evolve_mode(&p, 1.0, &h, &Schedule::new(40.0, 0.01, 1)).unwrap();
        let b = smoothing_budget(&traj, 0.0);
        let closed = 0.5 * (1.0 - (traj.last().norm / traj.initial_norm()).powi(2));
        assert!(b <= 0.5);
        assert!((b - closed).abs() < 1e-4, "{b} vs {closed}");
    }
}
