//! Time stepping of the linearized equation for one spatial mode `e^{ik x₁}`:
//! `∂_t h + ik cos θ h - d ψ̄ U(h) cos θ sin θ = ν ∂²_θ h - κ k² h`,
//! with `U(h) = -ι ∫ cos θ sin θ h dθ` the sheared velocity gradient.
//!
//! All linear terms are advanced together by Crank–Nicolson. Transport and diffusion
//! form a tridiagonal matrix in `m`; the stress feedback is a rank-one correction.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ModeError;
use crate::params::ModelParams;
use crate::spectral::OrientationSpectrum;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);

/// Norm growth treated as instability when there is no active feedback.
pub const BLOWUP_FACTOR: f64 = 1e6;

/// Time grid of a run: `t_end / dt` steps, one sample every `sample_every` steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub t_end: f64,
    pub dt: f64,
    pub sample_every: usize,
}

impl Schedule {
    pub fn new(t_end: f64, dt: f64, sample_every: usize) -> Self {
        Self {
            t_end,
            dt,
            sample_every: sample_every.max(1),
        }
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// One recorded state with its norms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSample {
    pub t: f64,
    pub state: OrientationSpectrum,
    /// `‖h‖`.
    pub norm: f64,
    /// `‖∂_θ h‖`.
    pub grad_norm: f64,
    /// `‖sin θ · h‖`.
    pub sin_norm: f64,
}

impl ModeSample {
    fn new(t: f64, state: OrientationSpectrum) -> Self {
        let norm = state.l2_norm();
        let grad_norm = state.derivative().l2_norm();
        let sin_norm = state.mul_sin().l2_norm();
        Self {
            t,
            state,
            norm,
            grad_norm,
            sin_norm,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeTrajectory {
    pub k: f64,
    pub params: ModelParams,
    pub dt: f64,
    pub samples: Vec<ModeSample>,
}

impl ModeTrajectory {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn norms(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.norm).collect()
    }

    pub fn initial_norm(&self) -> f64 {
        self.samples.first().map_or(0.0, |s| s.norm)
    }

    pub fn last(&self) -> &ModeSample {
        self.samples
            .last()
            .expect("trajectory has its initial sample")
    }
}

/// Crank–Nicolson propagator for a fixed `(params, k, dt, order)`.
#[derive(Debug, Clone)]
pub struct ModeStepper {
    order: usize,
    k: f64,
    dt: f64,
    nu: f64,
    /// Off-diagonal entry of the transport block, `-ik/2`.
    hop: C,
    /// `d ψ̄` times the feedback functional weights on `ĥ_{-2}`, `ĥ_2`.
    feedback: f64,
    iota: f64,
    decay: f64,
    // Thomas factorization of the implicit tridiagonal matrix.
    upper: Vec<C>,
    pivot: Vec<C>,
    lower: C,
    // Sherman–Morrison data for the rank-one feedback.
    response: Vec<C>,
    sm_denominator: C,
}

impl ModeStepper {
    pub fn new(params: &ModelParams, k: f64, dt: f64, order: usize) -> Self {
        let n = 2 * order + 1;
        let hop = C::new(0.0, -0.5 * k);
        let lower = -hop * (0.5 * dt);
        let diag = |i: usize| {
            let m = i as f64 - order as f64;
            C::from(1.0 + 0.5 * dt * params.nu * m * m)
        };
        let mut upper = vec![ZERO; n];
        let mut pivot = vec![ZERO; n];
        pivot[0] = diag(0);
        for i in 1..n {
            upper[i - 1] = lower / pivot[i - 1];
            pivot[i] = diag(i) - lower * upper[i - 1];
        }
        let mut s = Self {
            order,
            k,
            dt,
            nu: params.nu,
            hop,
            feedback: params.d.as_f64() * params.psi_bar,
            iota: params.iota(),
            decay: (-params.kappa * k * k * dt).exp(),
            upper,
            pivot,
            lower,
            response: Vec::new(),
            sm_denominator: C::from(1.0),
        };
        if s.feedback != 0.0 && order >= 2 {
            let mut w = vec![ZERO; n];
            w[order + 2] = C::new(0.0, -0.25);
            w[order - 2] = C::new(0.0, 0.25);
            s.solve_tridiagonal(&mut w);
            let uz = s.functional(&w);
            s.sm_denominator = 1.0 - uz * (0.5 * dt * s.feedback);
            s.response = w;
        }
        s
    }

    /// `U(h) = ι (iπ/2)(ĥ_{-2} - ĥ_2)`.
    fn functional(&self, h: &[C]) -> C {
        let o = self.order;
        C::new(0.0, 0.5 * PI * self.iota) * (h[o - 2] - h[o + 2])
    }

    fn solve_tridiagonal(&self, r: &mut [C]) {
        let n = r.len();
        r[0] /= self.pivot[0];
        for i in 1..n {
            r[i] = (r[i] - self.lower * r[i - 1]) / self.pivot[i];
        }
        for i in (0..n - 1).rev() {
            let next = r[i + 1];
            r[i] -= self.upper[i] * next;
        }
    }

    /// `A h` for the explicit half of the step.
    fn apply_operator(&self, h: &[C], out: &mut [C]) {
        let n = h.len();
        let o = self.order as f64;
        for i in 0..n {
            let m = i as f64 - o;
            let mut v = h[i] * (-self.nu * m * m);
            if i > 0 {
                v += self.hop * h[i - 1];
            }
            if i + 1 < n {
                v += self.hop * h[i + 1];
            }
            out[i] = v;
        }
        if !self.response.is_empty() {
            let u = self.functional(h) * self.feedback;
            out[self.order + 2] += u * C::new(0.0, -0.25);
            out[self.order - 2] += u * C::new(0.0, 0.25);
        }
    }

    /// Advances `h` by one step in place; `scratch` must have the same length.
    pub fn step(&self, h: &mut [C], scratch: &mut [C]) {
        self.apply_operator(h, scratch);
        let half = 0.5 * self.dt;
        for (x, a) in h.iter_mut().zip(scratch.iter()) {
            *x += a * half;
        }
        self.solve_tridiagonal(h);
        if !self.response.is_empty() {
            let scale = self.functional(h) * (half * self.feedback) / self.sm_denominator;
            for (x, z) in h.iter_mut().zip(&self.response) {
                *x += z * scale;
            }
        }
        if self.decay != 1.0 {
            for x in h.iter_mut() {
                *x *= self.decay;
            }
        }
    }

    pub fn k(&self) -> f64 {
        self.k
    }
}

/// Evolves `h_in` (at its own truncation order) under the linearized mode equation.
pub fn evolve_mode(
    params: &ModelParams,
    k: f64,
    h_in: &OrientationSpectrum,
    schedule: &Schedule,
) -> Result<ModeTrajectory, ModeError> {
    params.validate()?;
    if !(k >= 0.0) || !k.is_finite() {
        return Err(ModeError::Wavenumber(k));
    }
    let dt = schedule.dt;
    if !(dt > 0.0) || (k > 0.0 && dt > 0.5 / k) {
        return Err(ModeError::TimeStep { dt, k });
    }
    let steps = schedule.steps();
    let order = h_in.order();
    let mut samples = vec![ModeSample::new(0.0, h_in.clone())];
    if k == 0.0 {
        for n in (schedule.sample_every..=steps).step_by(schedule.sample_every) {
            samples.push(ModeSample::new(
                n as f64 * dt,
                heat_flow(h_in, params.nu, n as f64 * dt),
            ));
        }
        return Ok(ModeTrajectory {
            k,
            params: *params,
            dt,
            samples,
        });
    }
    let stepper = ModeStepper::new(params, k, dt, order);
    let mut h = h_in.coeffs().to_vec();
    let mut scratch = vec![ZERO; h.len()];
    let limit = BLOWUP_FACTOR * samples[0].norm;
    for n in 1..=steps {
        stepper.step(&mut h, &mut scratch);
        if n % schedule.sample_every == 0 {
            let state = OrientationSpectrum::from_coeffs(h.clone())?;
            let sample = ModeSample::new(n as f64 * dt, state);
            if params.psi_bar == 0.0 && sample.norm > limit {
                return Err(ModeError::StabilityViolation { t: sample.t });
            }
            samples.push(sample);
        }
    }
    Ok(ModeTrajectory {
        k,
        params: *params,
        dt,
        samples,
    })
}

/// Exact solution `ĥ_m(t) = e^{-νm²t} ĥ_m(0)` of the `k = 0` mode.
pub fn heat_flow(h_in: &OrientationSpectrum, nu: f64, t: f64) -> OrientationSpectrum {
    let mut out = h_in.clone();
    for (i, c) in out.coeffs_mut().iter_mut().enumerate() {
        let m = i as f64 - h_in.order() as f64;
        *c *= (-nu * m * m * t).exp();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Swimmer;

    fn spectrum(order: usize) -> OrientationSpectrum {
        OrientationSpectrum::from_fn(order, |t| {
            C::new(t.cos() + 0.3 * (2.0 * t).sin(), 0.2 * (3.0 * t).cos())
        })
    }

    #[test]
    fn implicit_solve_inverts_matrix() {
        let p = ModelParams::planar(0.3, 0.7, Swimmer::Pusher).unwrap();
        let order = 12;
        let s = ModeStepper::new(&p, 1.3, 0.1, order);
        let x: Vec<C> = spectrum(order).into_coeffs();
        // Form (I - dt/2 A) x and check that the step's implicit solve recovers x.
        let mut ax = vec![ZERO; x.len()];
        s.apply_operator(&x, &mut ax);
        let mut r: Vec<C> = x.iter().zip(&ax).map(|(a, b)| a - b * 0.05).collect();
        s.solve_tridiagonal(&mut r);
        let scale = s.functional(&r) * (0.05 * s.feedback) / s.sm_denominator;
        for (v, z) in r.iter_mut().zip(&s.response) {
            *v += z * scale;
        }
        for (a, b) in r.iter().zip(&x) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn heat_flow_at_zero_wavenumber() {
        let p = ModelParams::planar(0.2, 0.0, Swimmer::Puller).unwrap();
        let h = spectrum(8);
        let traj = evolve_mode(&p, 0.0, &h, &Schedule::new(1.0, 0.1, 5)).unwrap();
        let last = &traj.last().state;
        assert!((last.coeff(3) - h.coeff(3) * (-0.2f64 * 9.0).exp()).norm() < 1e-15);
        assert_eq!(traj.samples.len(), 3);
    }

    #[test]
    fn rejects_oversized_steps() {
        let p = ModelParams::planar(0.2, 0.0, Swimmer::Puller).unwrap();
        assert!(matches!(
            evolve_mode(&p, 4.0, &spectrum(8), &Schedule::new(1.0, 0.2, 1)),
            Err(ModeError::TimeStep { .. })
        ));
    }

    #[test]
    fn translational_diffusion_factor() {
        let p = ModelParams::new(
            crate::params::Dimension::Two,
            0.2,
            0.3,
            0.0,
            Swimmer::Puller,
        )
        .unwrap();
        let q = p.with_kappa(0.0);
        let h = spectrum(10);
        let s = Schedule::new(2.0, 0.05, 40);
        let a = evolve_mode(&p, 0.7, &h, &s).unwrap();
        let b = evolve_mode(&q, 0.7, &h, &s).unwrap();
        let factor = (-0.3f64 * 0.49 * 2.0).exp();
        assert!((a.last().norm - factor * b.last().norm).abs() < 1e-12);
    }
}
