//! The resolvent moment `γ_j(λ) = ∫ p₁² p_j² / (λ + i p₁) dp` over the orientation sphere.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::DispersionError;
use crate::params::Dimension;
use crate::quadrature::{adaptive_gk15, QuadratureError};

type C = Complex64;

/// Offsets used to approach the imaginary axis inside the pole band `|Im λ| <= 1`.
pub const BOUNDARY_OFFSETS: [f64; 3] = [1e-3, 5e-4, 2.5e-4];

/// Largest disagreement between extrapolation orders before a boundary value is flagged.
pub const BOUNDARY_TOLERANCE: f64 = 1e-4;

const ABS_TOL: f64 = 1e-14;
const REL_TOL: f64 = 1e-13;
const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaRegime {
    /// Direct quadrature with `Re λ > 0`, or on the axis away from the pole band.
    Direct,
    /// Boundary limit from the right by extrapolation in `Re λ`.
    BoundaryLimit,
    /// Boundary limit whose extrapolation orders disagree beyond tolerance.
    NearSingular,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaEvaluation {
    pub lambda: C,
    pub value: C,
    /// `dγ/dλ`.
    pub derivative: C,
    pub est_error: f64,
    pub regime: GammaRegime,
}

/// Evaluates `γ_j(λ)` for `Re λ >= 0`, `λ ≠ 0`. On the imaginary axis inside the pole band
/// the limit `Re λ → 0⁺` is returned.
pub fn gamma_j(lambda: C, d: Dimension, j: usize) -> Result<GammaEvaluation, DispersionError> {
    if j < 2 || j > d.value() as usize {
        return Err(DispersionError::Index { j, d: d.value() });
    }
    if !(lambda.re >= 0.0) || !lambda.im.is_finite() {
        return Err(DispersionError::Domain(lambda));
    }
    if lambda.norm() == 0.0 {
        return Err(DispersionError::Domain(lambda));
    }
    if lambda.re == 0.0 && lambda.im.abs() <= 1.0 {
        return boundary_limit(lambda, d);
    }
    let (value, derivative, est_error) = integrate(lambda, d)?;
    Ok(GammaEvaluation {
        lambda,
        value,
        derivative,
        est_error,
        regime: GammaRegime::Direct,
    })
}

fn boundary_limit(lambda: C, d: Dimension) -> Result<GammaEvaluation, DispersionError> {
    let mut vals = [C::new(0.0, 0.0); 3];
    let mut ders = [C::new(0.0, 0.0); 3];
    let mut err: f64 = 0.0;
    for (i, s) in BOUNDARY_OFFSETS.iter().enumerate() {
        let (v, dv, e) = integrate(C::new(*s, lambda.im), d)?;
        vals[i] = v;
        ders[i] = dv;
        err = err.max(e);
    }
    // Offsets halve, so Richardson weights are those of a quadratic through σ, σ/2, σ/4.
    let quad = |x: [C; 3]| (x[0] - x[1] * 6.0 + x[2] * 8.0) / 3.0;
    let lin = |x: [C; 3]| x[2] * 2.0 - x[1];
    let value = quad(vals);
    let gap = (value - lin(vals)).norm();
    let regime = if gap > BOUNDARY_TOLERANCE {
        GammaRegime::NearSingular
    } else {
        GammaRegime::BoundaryLimit
    };
    Ok(GammaEvaluation {
        lambda,
        value,
        derivative: quad(ders),
        est_error: err + gap,
        regime,
    })
}

/// Value, derivative and error estimate by adaptive quadrature. Inside the pole band the
/// variable is the offset `u` from the near-pole, so the small denominator `Im λ + p₁` is
/// formed without cancellation.
fn integrate(lambda: C, d: Dimension) -> Result<(C, C, f64), DispersionError> {
    let tau = lambda.im;
    let banded = tau.abs() < 1.0;
    let terms = |w: f64, gap: f64| {
        let r = 1.0 / C::new(lambda.re, gap);
        [r * w, -(r * r) * w]
    };
    match d {
        // Over [0, π], doubled: the integrand is even about θ = π.
        Dimension::Two => {
            let (pole, breaks) = if banded {
                let pole = (-tau).acos();
                (pole, vec![-pole, 0.0, PI - pole])
            } else {
                (0.0, vec![0.0, PI])
            };
            let f = |u: f64| {
                let (s, c) = (pole + u).sin_cos();
                let gap = if banded {
                    -2.0 * (pole + 0.5 * u).sin() * (0.5 * u).sin()
                } else {
                    tau + c
                };
                terms(c * c * s * s, gap)
            };
            let (v, e) = piecewise(f, &breaks)?;
            Ok((v[0] * 2.0, v[1] * 2.0, e * 2.0))
        }
        // Azimuth integrated out: ∫_{S²} p₁²p₂² g(p₁) dp = π ∫ x²(1-x²) g(x) dx.
        Dimension::Three => {
            let pole = if banded { -tau } else { 0.0 };
            let breaks = if banded {
                vec![-1.0 - pole, 0.0, 1.0 - pole]
            } else {
                vec![-1.0, 1.0]
            };
            let f = |u: f64| {
                let x = pole + u;
                let gap = if banded { u } else { tau + x };
                terms(PI * x * x * (1.0 - x * x), gap)
            };
            let (v, e) = piecewise(f, &breaks)?;
            Ok((v[0], v[1], e))
        }
    }
}

fn piecewise(
    f: impl Fn(f64) -> [C; 2] + Copy,
    breaks: &[f64],
) -> Result<([C; 2], f64), DispersionError> {
    let mut total = [C::new(0.0, 0.0); 2];
    let mut err = 0.0;
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let r =
            adaptive_gk15(f, w[0], w[1], ABS_TOL, REL_TOL, MAX_INTERVALS).map_err(|e| match e {
                QuadratureError::Budget { est_error, .. } => DispersionError::Quadrature(est_error),
                QuadratureError::Unresolved { est_error, .. } => {
                    DispersionError::Quadrature(est_error)
                }
            })?;
        total[0] += r.value[0];
        total[1] += r.value[1];
        err += r.est_error;
    }
    Ok((total, err))
}

/// `∫ p₁² p_j² dp`, the large-`λ` coefficient `γ_j(λ) ≈ moment/λ`.
pub fn fourth_moment(d: Dimension) -> f64 {
    match d {
        Dimension::Two => PI / 4.0,
        Dimension::Three => 4.0 * PI / 15.0,
    }
}
