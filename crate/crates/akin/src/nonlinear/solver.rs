//! Time stepping.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::diagnostics::{diagnostics, h_theorem_residuals, Diagnostics};
use super::{Field2D, Grid, SimError};
use crate::fftgrid::{index_of, wavenumber, FftNd};
use crate::mode::{Schedule, BLOWUP_FACTOR};
use crate::params::{Dimension, ModelParams};
use crate::stokes::{stokes_mode_solve, stress_from_modes};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);

/// Velocity and velocity gradient on the `x, y` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Flow {
    pub u: [Vec<f64>; 2],
    /// `grad[i][j] = ∂_j u_i`.
    pub grad: [[Vec<f64>; 2]; 2],
    /// `‖∇u‖_{L²(T²)}`.
    pub grad_l2: f64,
    pub max_speed: f64,
    /// Largest Frobenius norm of `∇u`.
    pub max_grad: f64,
    /// Largest `|k·û|`.
    pub max_divergence: f64,
}

/// The Stokes flow generated by `ψ`.
pub fn flow(field: &Field2D, iota: f64) -> Flow {
    flow_with(field, iota, &FftNd::new(&[field.grid.nx, field.grid.ny]))
}

fn flow_with(field: &Field2D, iota: f64, fft2: &FftNd) -> Flow {
    let grid = field.grid;
    let n2 = grid.nx * grid.ny;
    // u₁, u₂, ∂₁u₁, ∂₂u₁, ∂₁u₂, ∂₂u₂
    let mut spec: Vec<Vec<C>> = vec![vec![ZERO; n2]; 6];
    let mut grad_sq = 0.0;
    let mut max_divergence: f64 = 0.0;
    for kx in -grid.kx_max()..=grid.kx_max() {
        for ky in -grid.ky_max()..=grid.ky_max() {
            if kx == 0 && ky == 0 {
                continue;
            }
            let sigma = stress_from_modes(
                field.coeff(kx, ky, 0),
                field.coeff(kx, ky, 2),
                field.coeff(kx, ky, -2),
                iota,
            );
            let sol =
                stokes_mode_solve(&sigma, [kx as f64, ky as f64]).expect("nonzero wavevector");
            let j = index_of(kx, grid.nx) * grid.ny + index_of(ky, grid.ny);
            spec[0][j] = sol.u_hat[0];
            spec[1][j] = sol.u_hat[1];
            spec[2][j] = sol.grad_u_hat.get(0, 0);
            spec[3][j] = sol.grad_u_hat.get(0, 1);
            spec[4][j] = sol.grad_u_hat.get(1, 0);
            spec[5][j] = sol.grad_u_hat.get(1, 1);
            grad_sq += sol.grad_u_hat.norm().powi(2);
            max_divergence = max_divergence.max(sol.divergence().norm());
        }
    }
    let mut real: Vec<Vec<f64>> = spec
        .into_par_iter()
        .map(|mut s| {
            fft2.inverse(&mut s);
            s.into_iter().map(|z| z.re).collect()
        })
        .collect();
    let max_speed = (0..n2)
        .map(|j| real[0][j].hypot(real[1][j]))
        .fold(0.0, f64::max);
    let max_grad = (0..n2)
        .map(|j| (2..6).map(|c| real[c][j] * real[c][j]).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let g22 = real.pop().unwrap();
    let g21 = real.pop().unwrap();
    let g12 = real.pop().unwrap();
    let g11 = real.pop().unwrap();
    let u2 = real.pop().unwrap();
    let u1 = real.pop().unwrap();
    Flow {
        u: [u1, u2],
        grad: [[g11, g12], [g21, g22]],
        grad_l2: (4.0 * PI * PI * grad_sq).sqrt(),
        max_speed,
        max_grad,
        max_divergence,
    }
}

/// Crank–Nicolson factors of `I - (dt/2)L` for one wavevector, over the retained `m`.
#[derive(Debug, Clone)]
struct Block {
    /// Diagonal of `L`, `-νm² - κ|k|²`.
    diag: Vec<f64>,
    /// Coefficients of `ψ_{m-1}` and `ψ_{m+1}` in `L`.
    lower: C,
    upper: C,
    /// Thomas elimination of `I - (dt/2)L`.
    sweep: Vec<C>,
    inv_pivot: Vec<C>,
}

impl Block {
    fn new(kx: i64, ky: i64, params: &ModelParams, m_max: i64, dt: f64) -> Self {
        let k2 = (kx * kx + ky * ky) as f64;
        let (kx, ky) = (kx as f64, ky as f64);
        let diag: Vec<f64> = (-m_max..=m_max)
            .map(|m| -params.nu * (m * m) as f64 - params.kappa * k2)
            .collect();
        let lower = C::new(0.0, -0.5) * C::new(kx, -ky);
        let upper = C::new(0.0, -0.5) * C::new(kx, ky);
        let h = 0.5 * dt;
        let (sub, sup) = (-h * lower, -h * upper);
        let n = diag.len();
        let mut sweep = vec![ZERO; n];
        let mut inv_pivot = vec![ZERO; n];
        for i in 0..n {
            let mut pivot = C::from(1.0 - h * diag[i]);
            if i > 0 {
                pivot -= sub * sweep[i - 1];
            }
            inv_pivot[i] = pivot.inv();
            sweep[i] = sup * inv_pivot[i];
        }
        Self {
            diag,
            lower,
            upper,
            sweep,
            inv_pivot,
        }
    }

    /// `(I + (dt/2)L)x`.
    fn explicit(&self, x: &[C], dt: f64, out: &mut [C]) {
        let h = 0.5 * dt;
        let n = x.len();
        for i in 0..n {
            let mut v = x[i] * (1.0 + h * self.diag[i]);
            if i > 0 {
                v += self.lower * h * x[i - 1];
            }
            if i + 1 < n {
                v += self.upper * h * x[i + 1];
            }
            out[i] = v;
        }
    }

    /// Solves `(I - (dt/2)L)x = rhs` in place.
    fn solve(&self, rhs: &mut [C], dt: f64) {
        let sub = -0.5 * dt * self.lower;
        let n = rhs.len();
        rhs[0] *= self.inv_pivot[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - sub * rhs[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= self.sweep[i] * rhs[i + 1];
        }
    }
}

/// Steps fields of one grid and parameter set with a fixed `dt`.
#[derive(Debug, Clone)]
pub struct Simulator {
    params: ModelParams,
    grid: Grid,
    dt: f64,
    fft3: FftNd,
    fft2: FftNd,
    /// One entry per `(ix, iy)`, `None` where the wavevector is dealiased away.
    blocks: Vec<Option<Block>>,
    /// Spectral index of each retained `m`, in increasing order.
    m_slots: Vec<usize>,
    cos_sin: Vec<(f64, f64)>,
}

impl Simulator {
    pub fn new(params: &ModelParams, grid: Grid, dt: f64) -> Result<Self, SimError> {
        params.validate()?;
        if params.d != Dimension::Two {
            return Err(SimError::Dimension);
        }
        if !(params.kappa > 0.0) {
            return Err(SimError::Kappa);
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(SimError::TimeStep(dt));
        }
        let m_max = grid.m_max();
        let blocks = (0..grid.nx * grid.ny)
            .map(|j| {
                let kx = wavenumber(j / grid.ny, grid.nx);
                let ky = wavenumber(j % grid.ny, grid.ny);
                (kx.abs() <= grid.kx_max() && ky.abs() <= grid.ky_max())
                    .then(|| Block::new(kx, ky, params, m_max, dt))
            })
            .collect();
        let m_slots = (-m_max..=m_max).map(|m| index_of(m, grid.ntheta)).collect();
        let cos_sin = (0..grid.ntheta)
            .map(|i| {
                let (s, c) = (2.0 * PI * i as f64 / grid.ntheta as f64).sin_cos();
                (c, s)
            })
            .collect();
        Ok(Self {
            params: *params,
            grid,
            dt,
            fft3: FftNd::new(&grid.dims()),
            fft2: FftNd::new(&[grid.nx, grid.ny]),
            blocks,
            m_slots,
            cos_sin,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// `0.5·min(Δx/(1 + ‖u‖_∞), 1/(‖∇u‖_∞ M))`.
    pub fn cfl_limit(&self, flow: &Flow) -> f64 {
        let dx = 2.0 * PI / self.grid.nx.max(self.grid.ny) as f64;
        let rotation = 1.0 / (flow.max_grad * self.grid.m_max() as f64);
        0.5 * (dx / (1.0 + flow.max_speed)).min(rotation)
    }

    pub fn flow(&self, field: &Field2D) -> Flow {
        flow_with(field, self.params.iota(), &self.fft2)
    }

    /// Nonlinear terms `-∇·(uψ) - ∂_θ(gψ)` in spectral form, with the flow they came from.
    fn nonlinear(&self, field: &Field2D) -> (Vec<C>, Flow) {
        let grid = self.grid;
        let nt = grid.ntheta;
        let flow = self.flow(field);
        let mut psi = field.coeffs().to_vec();
        self.fft3.inverse(&mut psi);
        let mut fluxes = [
            vec![ZERO; grid.len()],
            vec![ZERO; grid.len()],
            vec![ZERO; grid.len()],
        ];
        let [fx, fy, ft] = &mut fluxes;
        fx.par_chunks_mut(nt)
            .zip(fy.par_chunks_mut(nt))
            .zip(ft.par_chunks_mut(nt))
            .zip(psi.par_chunks(nt))
            .enumerate()
            .for_each(|(j, (((ax, ay), at), p))| {
                let (u1, u2) = (flow.u[0][j], flow.u[1][j]);
                let (g11, g12) = (flow.grad[0][0][j], flow.grad[0][1][j]);
                let (g21, g22) = (flow.grad[1][0][j], flow.grad[1][1][j]);
                for (i, &(c, s)) in self.cos_sin.iter().enumerate() {
                    let v = p[i].re;
                    let g = g21 * c * c - g12 * s * s + (g22 - g11) * s * c;
                    ax[i] = C::from(u1 * v);
                    ay[i] = C::from(u2 * v);
                    at[i] = C::from(g * v);
                }
            });
        fluxes.par_iter_mut().for_each(|f| self.fft3.forward(f));
        let [fx, fy, ft] = fluxes;
        let mut out = fx;
        out.par_iter_mut().enumerate().for_each(|(idx, o)| {
            let (kx, ky, m) = grid.wavenumbers(idx);
            *o = if grid.retains(kx, ky, m) {
                -C::i() * (*o * kx as f64 + fy[idx] * ky as f64 + ft[idx] * m as f64)
            } else {
                ZERO
            };
        });
        (out, flow)
    }

    /// `solve[(I + dt/2 L)ψ + dt·(Σ wᵢ nᵢ)]` for each retained wavevector.
    fn implicit(&self, psi: &[C], forcing: &[(&[C], f64)]) -> Vec<C> {
        let nt = self.grid.ntheta;
        let mut out = vec![ZERO; psi.len()];
        out.par_chunks_mut(nt).enumerate().for_each(|(j, chunk)| {
            let Some(block) = &self.blocks[j] else { return };
            let base = j * nt;
            let x: Vec<C> = self.m_slots.iter().map(|&s| psi[base + s]).collect();
            let mut rhs = vec![ZERO; x.len()];
            block.explicit(&x, self.dt, &mut rhs);
            for (n, w) in forcing {
                for (r, &s) in rhs.iter_mut().zip(&self.m_slots) {
                    *r += n[base + s] * (w * self.dt);
                }
            }
            block.solve(&mut rhs, self.dt);
            for (&s, v) in self.m_slots.iter().zip(rhs) {
                chunk[s] = v;
            }
        });
        out
    }

    /// One step. Returns the flow of the incoming state.
    pub fn step(&self, field: &mut Field2D) -> Result<Flow, SimError> {
        let (n0, flow) = self.nonlinear(field);
        let limit = self.cfl_limit(&flow);
        if self.dt > limit {
            return Err(SimError::CflViolation {
                t: field.t,
                dt: self.dt,
                limit,
            });
        }
        let predictor = self.implicit(field.coeffs(), &[(&n0, 1.0)]);
        let mut star = field.clone();
        star.coeffs_mut().copy_from_slice(&predictor);
        let (n1, _) = self.nonlinear(&star);
        let next = self.implicit(field.coeffs(), &[(&n0, 0.5), (&n1, 0.5)]);
        field.coeffs_mut().copy_from_slice(&next);
        field.t += self.dt;
        Ok(flow)
    }
}

/// Diagnostics of a nonlinear run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimTrajectory {
    pub params: ModelParams,
    pub grid: Grid,
    pub dt: f64,
    pub samples: Vec<Diagnostics>,
    /// State at the end of the run.
    pub field: Field2D,
}

impl SimTrajectory {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn fneq_norms(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.fneq_norm).collect()
    }

    pub fn f0_norms(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.f0_norm).collect()
    }

    pub fn entropies(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.entropy).collect()
    }

    /// Largest H-theorem residual over the samples.
    pub fn h_theorem_residual(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.h_theorem_residual)
            .fold(0.0, f64::max)
    }
}

/// Evolves `field` over `schedule`, sampling diagnostics at `t = 0` and every
/// `sample_every` steps.
pub fn run(
    field: Field2D,
    params: &ModelParams,
    schedule: &Schedule,
) -> Result<SimTrajectory, SimError> {
    run_observed(field, params, schedule, |_, _| {})
}

/// As [`run`], handing each sampled state to `observe`.
pub fn run_observed(
    mut field: Field2D,
    params: &ModelParams,
    schedule: &Schedule,
    mut observe: impl FnMut(&Field2D, &Diagnostics),
) -> Result<SimTrajectory, SimError> {
    if field.psi_bar != params.psi_bar {
        return Err(SimError::PsiBarMismatch {
            field: field.psi_bar,
            params: params.psi_bar,
        });
    }
    let sim = Simulator::new(params, field.grid, schedule.dt)?;
    let start = field.t;
    let initial = field.perturbation_l2();
    let mut samples = Vec::new();
    let mut record = |field: &Field2D, samples: &mut Vec<Diagnostics>| {
        let d = diagnostics(field, params, &sim.flow(field));
        observe(field, &d);
        samples.push(d);
    };
    record(&field, &mut samples);
    for n in 1..=schedule.steps() {
        sim.step(&mut field)?;
        field.t = start + n as f64 * schedule.dt;
        let norm = field.perturbation_l2();
        if initial > 0.0 && norm > BLOWUP_FACTOR * initial || !norm.is_finite() {
            return Err(SimError::BlowupDetected { t: field.t, norm });
        }
        if n % schedule.sample_every == 0 {
            record(&field, &mut samples);
        }
    }
    let residuals = h_theorem_residuals(&samples, params.psi_bar);
    for (s, r) in samples.iter_mut().zip(residuals) {
        s.h_theorem_residual = r;
    }
    Ok(SimTrajectory {
        params: *params,
        grid: field.grid,
        dt: schedule.dt,
        samples,
        field,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinear::{init_field, InitKind};
    use crate::params::Swimmer;

    fn params(psi_bar: f64, swimmer: Swimmer) -> ModelParams {
        ModelParams::planar(0.1, psi_bar, swimmer)
            .unwrap()
            .with_kappa(0.05)
    }

    #[test]
    fn equilibrium_is_fixed() {
        let grid = Grid::new(8, 8, 16).unwrap();
        let p = params(2.0, Swimmer::Pusher);
        let mut f = Field2D::uniform(grid, 2.0);
        let sim = Simulator::new(&p, grid, 0.01).unwrap();
        for _ in 0..5 {
            sim.step(&mut f).unwrap();
        }
        assert_eq!(f.coeffs(), Field2D::uniform(grid, 2.0).coeffs());
    }

    #[test]
    fn mass_and_symmetry_survive() {
        let grid = Grid::new(16, 16, 16).unwrap();
        let p = params(1.0, Swimmer::Pusher);
        let f = init_field(&InitKind::RandomSmooth, 0.5, 1.0, 7, grid).unwrap();
        let traj = run(f, &p, &Schedule::new(0.5, 0.01, 10)).unwrap();
        let m0 = traj.samples[0].mass;
        assert!(traj
            .samples
            .iter()
            .all(|s| ((s.mass - m0) / m0).abs() < 1e-13));
        assert!(traj.field.hermitian_defect() < 1e-13);
    }

    #[test]
    fn zero_kappa_rejected() {
        let p = ModelParams::planar(0.1, 1.0, Swimmer::Puller).unwrap();
        let grid = Grid::new(8, 8, 8).unwrap();
        assert!(matches!(
            Simulator::new(&p, grid, 0.01),
            Err(SimError::Kappa)
        ));
    }

    #[test]
    fn incompressible_flow() {
        let grid = Grid::new(16, 16, 16).unwrap();
        let f = init_field(&InitKind::RandomSmooth, 0.5, 1.0, 3, grid).unwrap();
        let fl = flow(&f, -1.0);
        assert!(fl.max_divergence <= 1e-12);
        assert!(fl.grad_l2 > 0.0);
    }
}
