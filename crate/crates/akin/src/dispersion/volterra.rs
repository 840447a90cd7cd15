//! Time-domain route to the linearized stress feedback of a single mode `k = e₁`.
//!
//! With `U(t)` the scalar `(∇û)₂₁` up to the swimmer sign, the mode obeys
//! `U = F + ι d ψ̄ ∫₀ᵗ κ(t-s) U(s) ds`, where `F(t) = -∫ p₁p₂ e^{-ip₁t} h_in dp` is the
//! free-transport data term and `κ(t) = -∫ p₁²p₂² e^{-ip₁t} dp`. The physical gradient
//! entry is `ι U`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::DispersionError;
use crate::params::{Dimension, ModelParams};
use crate::quadrature::GaussLegendre;
use crate::spectral::OrientationSpectrum;

type C = Complex64;

/// Largest time step accepted by [`volterra_solve`].
pub const MAX_DT: f64 = 0.05;

/// Number of uniform circle nodes that integrate `e^{-it cos θ}` times a trigonometric
/// polynomial of degree `degree` to rounding.
pub fn circle_nodes(t_max: f64, degree: usize) -> usize {
    let t = t_max.abs();
    let n = t + 15.0 * t.cbrt() + 64.0 + degree as f64;
    (2 * (n.ceil() as usize)).next_power_of_two()
}

/// Oscillatory moments `∫₀^{2π} w(θ) e^{-it cos θ} dθ` for a fixed weight, valid for `t <= t_max`.
#[derive(Debug, Clone)]
pub struct CircleMoment {
    cos: Vec<f64>,
    weights: Vec<C>,
}

impl CircleMoment {
    /// `weight` given as a spectrum; sampled by inverse FFT on a grid resolving `t_max`.
    pub fn new(weight: &OrientationSpectrum, t_max: f64) -> Self {
        let n = circle_nodes(t_max, weight.order());
        Self::from_samples(&weight.to_samples(n))
    }

    /// Weight values at the uniform nodes `θ_j = 2πj/n`.
    pub fn from_samples(samples: &[C]) -> Self {
        let n = samples.len();
        let dtheta = 2.0 * PI / n as f64;
        let cos = (0..n).map(|j| (j as f64 * dtheta).cos()).collect();
        let weights = samples.iter().map(|&w| w * dtheta).collect();
        Self { cos, weights }
    }

    pub fn at(&self, t: f64) -> C {
        self.cos
            .iter()
            .zip(&self.weights)
            .map(|(&c, &w)| w * C::from_polar(1.0, -t * c))
            .sum()
    }
}

/// `p₁²p₂² = (1 - cos 4θ)/8` as a spectrum.
fn p1p2_squared() -> OrientationSpectrum {
    let mut s = OrientationSpectrum::zeros(4);
    s.set(0, C::from(0.125));
    s.set(4, C::from(-0.0625));
    s.set(-4, C::from(-0.0625));
    s
}

/// Memory kernel `κ(t) = -∫ p₁²p₂² e^{-ip₁t} dp`.
pub fn kernel_k(t: f64, d: Dimension) -> C {
    match d {
        Dimension::Two => -CircleMoment::new(&p1p2_squared(), t).at(t),
        Dimension::Three => {
            let gl = GaussLegendre::new((t.abs() as usize) / 2 + 40);
            let v: C = gl.integrate(-1.0, 1.0, |x| C::from_polar(x * x * (1.0 - x * x), -t * x));
            -v * PI
        }
    }
}

/// Kernel samples `κ(n·dt)` for `n = 0..len`.
pub fn kernel_samples(d: Dimension, dt: f64, len: usize) -> Vec<C> {
    let t_max = dt * len.saturating_sub(1) as f64;
    match d {
        Dimension::Two => {
            let m = CircleMoment::new(&p1p2_squared(), t_max);
            (0..len).map(|n| -m.at(n as f64 * dt)).collect()
        }
        Dimension::Three => (0..len).map(|n| kernel_k(n as f64 * dt, d)).collect(),
    }
}

/// Free-transport data term `F(t) = -∫ p₁p₂ e^{-ip₁t} h_in dp` on the circle.
pub fn forcing_term(h_in: &OrientationSpectrum, t: f64) -> C {
    Forcing::new(h_in, t).at(t)
}

/// Reusable evaluator of [`forcing_term`] for all `t <= t_max`.
#[derive(Debug, Clone)]
pub struct Forcing(CircleMoment);

impl Forcing {
    pub fn new(h_in: &OrientationSpectrum, t_max: f64) -> Self {
        let n = circle_nodes(t_max, h_in.order() + 2);
        let prod: Vec<C> = h_in
            .to_samples(n)
            .iter()
            .enumerate()
            .map(|(j, &h)| {
                let theta = 2.0 * PI * j as f64 / n as f64;
                h * (theta.cos() * theta.sin())
            })
            .collect();
        Self(CircleMoment::from_samples(&prod))
    }

    pub fn at(&self, t: f64) -> C {
        -self.0.at(t)
    }
}

/// Samples of the feedback scalar on a uniform time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolterraTrajectory {
    pub dt: f64,
    pub times: Vec<f64>,
    /// `U(t)`; the physical `(∇û)₂₁` is `ι U`.
    pub u: Vec<C>,
    pub forcing: Vec<C>,
}

impl VolterraTrajectory {
    pub fn end_time(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    /// Physical gradient entry `(∇û)₂₁ = ι U`.
    pub fn grad_u(&self, iota: f64) -> impl Iterator<Item = C> + '_ {
        self.u.iter().map(move |&u| u * iota)
    }

    /// `∫ |U|² ⟨t⟩^{weight} dt` over `[a, b]` by the trapezoid rule on the samples.
    pub fn weighted_energy(&self, weight: f64, a: f64, b: f64) -> f64 {
        let vals: Vec<(f64, f64)> = self
            .times
            .iter()
            .zip(&self.u)
            .filter(|(&t, _)| t >= a - 1e-12 && t <= b + 1e-12)
            .map(|(&t, u)| (t, u.norm_sqr() * (1.0 + t * t).powf(0.5 * weight)))
            .collect();
        vals.windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
            .sum()
    }
}

/// Marches the Volterra equation on `[0, T]` with the product trapezoid rule.
pub fn volterra_solve(
    h_in: &OrientationSpectrum,
    params: &ModelParams,
    t_end: f64,
    dt: f64,
) -> Result<VolterraTrajectory, DispersionError> {
    if params.d != Dimension::Two {
        return Err(DispersionError::Unsupported(
            "the Volterra solver is planar",
        ));
    }
    if !(dt > 0.0 && dt <= MAX_DT) {
        return Err(DispersionError::TimeStep { dt, max: MAX_DT });
    }
    let steps = (t_end / dt).round() as usize;
    let times: Vec<f64> = (0..=steps).map(|n| n as f64 * dt).collect();
    let forcing_eval = Forcing::new(h_in, t_end);
    let forcing: Vec<C> = times.iter().map(|&t| forcing_eval.at(t)).collect();
    let kernel = kernel_samples(params.d, dt, steps + 1);
    let g = params.coupling() * dt;
    let denom = 1.0 - kernel[0] * (0.5 * g);
    let mut u = Vec::with_capacity(steps + 1);
    u.push(forcing[0]);
    for n in 1..=steps {
        let mut history = kernel[n] * u[0] * 0.5;
        for j in 1..n {
            history += kernel[n - j] * u[j];
        }
        u.push((forcing[n] + history * g) / denom);
    }
    Ok(VolterraTrajectory {
        dt,
        times,
        u,
        forcing,
    })
}

/// Duhamel remainder `g(θ, t) = d ψ̄ ∫₀ᵗ e^{-i cos θ (t-s)} (∇û)₂₁(s) cos θ sin θ ds`
/// at each of `times`, returned as spectra of order `order`. The solution of the mode
/// equation is `e^{-it cos θ} h_in + g`.
pub fn duhamel_remainder_series(
    traj: &VolterraTrajectory,
    params: &ModelParams,
    times: &[f64],
    order: usize,
) -> Result<Vec<OrientationSpectrum>, DispersionError> {
    let t_end = traj.end_time();
    if let Some(&bad) = times.iter().find(|&&t| t < 0.0 || t > t_end + 1e-9) {
        return Err(DispersionError::OffGrid(bad));
    }
    let n = circle_nodes(t_end, 2)
        .max(2 * order + 2)
        .next_power_of_two();
    let dtheta = 2.0 * PI / n as f64;
    let (cos, cs): (Vec<f64>, Vec<f64>) = (0..n)
        .map(|j| (j as f64 * dtheta).sin_cos())
        .map(|(s, c)| (c, c * s))
        .unzip();
    let coef = params.iota() * params.d.as_f64() * params.psi_bar;
    let dt = traj.dt;
    let rot: Vec<C> = cos.iter().map(|&c| C::from_polar(1.0, -c * dt)).collect();
    let mut g = vec![C::new(0.0, 0.0); n];
    let mut out = Vec::with_capacity(times.len());
    let mut want = times.iter().copied().peekable();
    let mut sorted = times.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted != times {
        return Err(DispersionError::OffGrid(f64::NAN));
    }
    for step in 0..traj.u.len() {
        let t = traj.times[step];
        if step > 0 {
            let (u0, u1) = (traj.u[step - 1] * coef, traj.u[step] * coef);
            for j in 0..n {
                g[j] = (g[j] + u0 * (0.5 * dt * cs[j])) * rot[j] + u1 * (0.5 * dt * cs[j]);
            }
        }
        while let Some(&tw) = want.peek() {
            if tw > t + 0.5 * dt {
                break;
            }
            if (tw - t).abs() > 1e-9 * t.max(1.0) {
                return Err(DispersionError::OffGrid(tw));
            }
            out.push(OrientationSpectrum::from_samples(&g, order).expect("grid sized from order"));
            want.next();
        }
    }
    Ok(out)
}

/// [`duhamel_remainder_series`] at a single grid time.
pub fn duhamel_remainder(
    traj: &VolterraTrajectory,
    params: &ModelParams,
    t: f64,
    order: usize,
) -> Result<OrientationSpectrum, DispersionError> {
    Ok(duhamel_remainder_series(traj, params, &[t], order)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Swimmer;

    fn sin2(order: usize) -> OrientationSpectrum {
        OrientationSpectrum::from_fn(order, |t| C::from((2.0 * t).sin()))
    }

    #[test]
    fn kernel_at_origin() {
        assert!((kernel_k(0.0, Dimension::Two) - C::from(-PI / 4.0)).norm() < 1e-14);
        assert!((kernel_k(0.0, Dimension::Three) - C::from(-4.0 * PI / 15.0)).norm() < 1e-14);
    }

    #[test]
    fn forcing_values() {
        assert!((forcing_term(&sin2(8), 0.0) - C::from(-PI / 2.0)).norm() < 1e-14);
        let one = OrientationSpectrum::constant(C::from(1.0), 8);
        for t in [0.0, 3.0, 40.0] {
            assert!(forcing_term(&one, t).norm() < 1e-13);
        }
    }

    #[test]
    fn uncoupled_solution_is_forcing() {
        let p = ModelParams::planar(0.1, 0.0, Swimmer::Pusher).unwrap();
        let traj = volterra_solve(&sin2(8), &p, 5.0, 0.05).unwrap();
        assert_eq!(traj.u, traj.forcing);
        assert_eq!(traj.u[0], traj.forcing[0]);
    }

    #[test]
    fn rejects_large_steps() {
        let p = ModelParams::planar(0.1, 1.0, Swimmer::Pusher).unwrap();
        assert!(matches!(
            volterra_solve(&sin2(8), &p, 1.0, 0.1),
            Err(DispersionError::TimeStep { .. })
        ));
    }

    #[test]
    fn remainder_vanishes_without_coupling_or_time() {
        let p = ModelParams::planar(0.1, 0.0, Swimmer::Pusher).unwrap();
        let traj = volterra_solve(&sin2(8), &p, 2.0, 0.05).unwrap();
        assert_eq!(
            duhamel_remainder(&traj, &p, 2.0, 16).unwrap().l2_norm(),
            0.0
        );
        let p = p.with_psi_bar(0.3);
        let traj = volterra_solve(&sin2(8), &p, 2.0, 0.05).unwrap();
        assert_eq!(
            duhamel_remainder(&traj, &p, 0.0, 16).unwrap().l2_norm(),
            0.0
        );
        assert!(duhamel_remainder(&traj, &p, 2.0, 16).unwrap().l2_norm() > 0.0);
        assert!(duhamel_remainder(&traj, &p, 2.01, 16).is_err());
    }
}
