//! The hypocoercive energy `Φ` and its coefficient schedule.

use std::f64::consts::E;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ModeError, ModeTrajectory};
use crate::params::{Dimension, ModelParams};
use crate::spectral::OrientationSpectrum;

/// Barred constants, all determined by the Poincaré constant `c0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypoCoefficients {
    pub c0: f64,
    /// `ā₁ … ā₄`.
    pub a: [f64; 4],
    /// `δ̄₀ … δ̄₄`.
    pub delta: [f64; 5],
    pub alpha0: f64,
    pub beta0: f64,
}

/// The coefficients after scaling by `(ν, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    /// Young's parameter `ν^{-1/2}k^{-1/2}/(16c0)` splitting the cross term.
    pub delta: f64,
}

impl ScaledCoefficients {
    /// `a2/δ ≤ a1` and `δ·a2 ≤ a3/4`, up to rounding.
    pub fn young_conditions_hold(&self) -> bool {
        let slack = 1.0 + 1e-12;
        self.a2 / self.delta <= self.a1 * slack && self.delta * self.a2 <= 0.25 * self.a3 * slack
    }
}

/// Planar coefficients for a given `c0`.
pub fn hypo_coefficients(c0: f64) -> Result<HypoCoefficients, ModeError> {
    HypoCoefficients::new(c0, Dimension::Two)
}

impl HypoCoefficients {
    pub fn new(c0: f64, d: Dimension) -> Result<Self, ModeError> {
        if !(c0 > 0.0) || !c0.is_finite() {
            return Err(ModeError::C0(c0));
        }
        let a1 = c0 / (64.0 * c0 * c0 + 1.0);
        let a2 = a1 / (16.0 * c0);
        let a3 = a1 / (64.0 * c0 * c0);
        let a4 = a1 / (128.0 * c0 * c0);
        let delta = [
            64.0 * c0,
            4.0 * c0,
            (d.as_f64() - 1.0) * c0,
            0.25,
            0.25 / c0,
        ];
        let alpha0 = a3;
        let beta0 = E * (1.0 + 0.75 * alpha0 * a1 + 1.5 * a3);
        Ok(Self {
            c0,
            a: [a1, a2, a3, a4],
            delta,
            alpha0,
            beta0,
        })
    }

    pub fn scaled(&self, nu: f64, k: f64) -> ScaledCoefficients {
        let (sn, sk) = (nu.sqrt(), k.sqrt());
        ScaledCoefficients {
            a1: self.a[0] * sn / sk,
            a2: self.a[1] / k,
            a3: self.a[2] / (sn * k * sk),
            delta: 1.0 / (16.0 * self.c0 * sn * sk),
        }
    }
}

struct PhiTerms {
    mass: f64,
    grad: f64,
    cross: f64,
    transverse: f64,
}

fn phi_terms(h: &OrientationSpectrum, k: f64) -> PhiTerms {
    let dh = h.derivative();
    let sin_h = h.mul_sin();
    let transverse = sin_h.scale(Complex64::new(0.0, -k));
    PhiTerms {
        mass: h.inner(h).re,
        grad: dh.inner(&dh).re,
        cross: transverse.inner(&dh).re,
        transverse: transverse.inner(&transverse).re,
    }
}

/// `Φ = ½‖h‖² + (a₁/2)‖∂_θh‖² + a₂ Re⟨-ik sin θ h, ∂_θh⟩ + (a₃/2)‖k sin θ h‖²`.
pub fn hypo_phi(
    h: &OrientationSpectrum,
    k: f64,
    params: &ModelParams,
    coeffs: &HypoCoefficients,
) -> f64 {
    let s = coeffs.scaled(params.nu, k);
    let t = phi_terms(h, k);
    0.5 * t.mass + 0.5 * s.a1 * t.grad + s.a2 * t.cross + 0.5 * s.a3 * t.transverse
}

/// Lower and upper quadratic bounds sandwiching `Φ`.
pub fn phi_bounds(
    h: &OrientationSpectrum,
    k: f64,
    params: &ModelParams,
    coeffs: &HypoCoefficients,
) -> (f64, f64) {
    let s = coeffs.scaled(params.nu, k);
    let t = phi_terms(h, k);
    let lower = 0.5 * t.mass + 0.25 * (s.a1 * t.grad + s.a3 * t.transverse);
    let upper = 0.5 * t.mass + 0.75 * (s.a1 * t.grad + s.a3 * t.transverse);
    (lower, upper)
}

impl ModeTrajectory {
    /// `Φ` at every sample.
    pub fn phi(&self, coeffs: &HypoCoefficients) -> Vec<f64> {
        self.samples
            .iter()
            .map(|s| hypo_phi(&s.state, self.k, &self.params, coeffs))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Swimmer;
    use std::f64::consts::PI;

    #[test]
    fn unit_constant() {
        let c = hypo_coefficients(1.0).unwrap();
        assert_eq!(c.a[0], 1.0 / 65.0);
        assert!((c.a[1] - 1.0 / (16.0 * 65.0)).abs() < 1e-18);
        assert!((c.a[2] - 1.0 / (64.0 * 65.0)).abs() < 1e-18);
        assert!((2.0 * c.a[3] - c.a[2]).abs() < 1e-18);
        assert_eq!(c.delta, [64.0, 4.0, 1.0, 0.25, 0.25]);
    }

    #[test]
    fn first_harmonic_value() {
        let c = hypo_coefficients(0.7).unwrap();
        let p = ModelParams::planar(1.0, 0.0, Swimmer::Puller).unwrap();
        let phi = hypo_phi(&OrientationSpectrum::exponential(1, 8), 1.0, &p, &c);
        let expected = PI * (1.0 + c.a[0] + 0.5 * c.a[2]);
        assert!((phi - expected).abs() < 1e-13, "{phi} vs {expected}");
    }

    #[test]
    fn rejects_bad_c0() {
        assert!(hypo_coefficients(0.0).is_err());
        assert!(hypo_coefficients(f64::NAN).is_err());
    }
}
