//! Free transport `h(θ, t) = e^{-it cos θ} h_in(θ)` and its phase-mixing decay in
//! negative Sobolev norms.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::volterra::circle_nodes;
use super::DispersionError;
use crate::fit::{fit_power_law, RateFit};
use crate::quadrature::{sphere_integral_3d, SphereQuadrature3D};
use crate::spectral::OrientationSpectrum;

type C = Complex64;

/// The exactly transported profile at time `t`, resolved to rounding.
pub fn free_transport(h_in: &OrientationSpectrum, t: f64) -> OrientationSpectrum {
    let n = circle_nodes(t, h_in.order());
    let samples: Vec<C> = h_in
        .to_samples(n)
        .into_iter()
        .enumerate()
        .map(|(j, h)| h * C::from_polar(1.0, -t * (2.0 * PI * j as f64 / n as f64).cos()))
        .collect();
    OrientationSpectrum::from_samples(&samples, n / 2 - 1).expect("grid sized from order")
}

/// Orientation average `⨏ h(θ, t) dθ` of the transported profile.
pub fn density_moment(h_in: &OrientationSpectrum, t: f64) -> C {
    free_transport(h_in, t).coeff(0)
}

/// Sphere average `⨏_{S²} e^{-itp₁} dp` of transported uniform data.
pub fn density_moment_sphere(t: f64) -> C {
    let q = SphereQuadrature3D::with_degree(2 * (t.abs().ceil() as usize) + 40);
    sphere_integral_3d(|p| C::from_polar(1.0, -t * p[0]), &q).value / (4.0 * PI)
}

/// `‖e^{-it cos θ} h_in‖_{H^{-s}}` at each time.
pub fn free_transport_norms(h_in: &OrientationSpectrum, s: f64, times: &[f64]) -> Vec<f64> {
    times
        .iter()
        .map(|&t| free_transport(h_in, t).sobolev_norm(-s))
        .collect()
}

/// Log-log decay exponent of `‖e^{-it cos θ} h_in‖_{H^{-s}}` over `window`, sampled at spacing `dt`.
pub fn free_transport_decay_over(
    h_in: &OrientationSpectrum,
    s: f64,
    window: (f64, f64),
    dt: f64,
) -> Result<RateFit, DispersionError> {
    let n = ((window.1 - window.0) / dt).round() as usize;
    let times: Vec<f64> = (0..=n).map(|i| window.0 + i as f64 * dt).collect();
    let norms = free_transport_norms(h_in, s, &times);
    Ok(fit_power_law(&times, &norms, window)?)
}

/// Log-log decay exponent over `[T/4, T]`.
pub fn free_transport_decay(
    h_in: &OrientationSpectrum,
    s: f64,
    t_end: f64,
) -> Result<RateFit, DispersionError> {
    free_transport_decay_over(h_in, s, (0.25 * t_end, t_end), 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transport_preserves_l2() {
        let h = OrientationSpectrum::from_fn(6, |t| C::new(t.cos(), (2.0 * t).sin()));
        for t in [0.0, 5.0, 60.0] {
            assert!((free_transport(&h, t).l2_norm() - h.l2_norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn density_at_origin() {
        let one = OrientationSpectrum::constant(C::from(1.0), 4);
        assert!((density_moment(&one, 0.0) - C::from(1.0)).norm() < 1e-15);
        assert!((density_moment_sphere(0.0) - C::from(1.0)).norm() < 1e-14);
        let t = 2.0f64;
        assert!((density_moment_sphere(t) - C::from(t.sin() / t)).norm() < 1e-14);
    }
}
