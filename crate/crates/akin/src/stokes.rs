//! Active stress and the Fourier-multiplier Stokes solve on the torus.
//!
//! Velocity solves `-Δu + ∇q = div Σ`, `div u = 0` with unit viscosity. For a
//! single mode `e^{ik·x}` the solution is `û = i|k|⁻¹ (I - k̄⊗k̄) Σ̂ k̄` with
//! `k̄ = k/|k|`, and `∇û = û ⊗ ik`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fftgrid::{wavenumber, FftNd};
use crate::params::ModelParams;
use crate::spectral::OrientationSpectrum;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const I: C = C::new(0.0, 1.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StokesError {
    #[error("the zero wavevector carries no flow")]
    ZeroWavevector,
    #[error("stress components have {got} values on a {nx}x{ny} grid")]
    GridMismatch { got: usize, nx: usize, ny: usize },
}

/// A 2×2 complex matrix, used for stresses and velocity gradients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2(pub [[C; 2]; 2]);

impl Matrix2 {
    pub const ZERO: Self = Self([[ZERO; 2]; 2]);

    pub fn scalar(c: C) -> Self {
        Self([[c, ZERO], [ZERO, c]])
    }

    pub fn get(&self, i: usize, j: usize) -> C {
        self.0[i][j]
    }

    pub fn trace(&self) -> C {
        self.0[0][0] + self.0[1][1]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn apply(&self, v: [C; 2]) -> [C; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `R M Rᵀ` for a rotation `R` by `angle`.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let r = [[c, -s], [s, c]];
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                for a in 0..2 {
                    for b in 0..2 {
                        *slot += self.0[a][b] * (r[i][a] * r[j][b]);
                    }
                }
            }
        }
        Self(out)
    }
}

/// A symmetric stress, either a single Fourier mode or a physical value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StressTensor(pub Matrix2);

impl StressTensor {
    pub fn symmetric(s11: C, s12: C, s22: C) -> Self {
        Self(Matrix2([[s11, s12], [s12, s22]]))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (self.0.get(0, 1) - self.0.get(1, 0)).norm() <= tol
    }
}

/// Active stress `Σ = ι ∫ p⊗p h dθ` of an orientation profile on the circle.
/// Only `ĥ₀` and `ĥ_{±2}` contribute.
pub fn active_stress(h: &OrientationSpectrum, params: &ModelParams) -> StressTensor {
    stress_from_modes(h.coeff(0), h.coeff(2), h.coeff(-2), params.iota())
}

/// [`active_stress`] from the three contributing coefficients `ĥ₀, ĥ₂, ĥ₋₂`.
pub fn stress_from_modes(h0: C, h2: C, hm2: C, iota: f64) -> StressTensor {
    let even = (h2 + hm2) * 0.5;
    let s11 = (h0 + even) * (iota * PI);
    let s22 = (h0 - even) * (iota * PI);
    let s12 = I * (h2 - hm2) * (0.5 * iota * PI);
    StressTensor::symmetric(s11, s12, s22)
}

/// Velocity and velocity gradient of one Fourier mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowModeSolution {
    pub k: [f64; 2],
    pub u_hat: [C; 2],
    /// `(∇û)_{ij} = i k_j û_i`.
    pub grad_u_hat: Matrix2,
}

impl FlowModeSolution {
    /// `k · û`.
    pub fn divergence(&self) -> C {
        self.u_hat[0] * self.k[0] + self.u_hat[1] * self.k[1]
    }
}

/// Solves Stokes for the stress mode `sigma_hat` at wavevector `k ≠ 0`.
pub fn stokes_mode_solve(
    sigma_hat: &StressTensor,
    k: [f64; 2],
) -> Result<FlowModeSolution, StokesError> {
    let kn = k[0].hypot(k[1]);
    if kn == 0.0 {
        return Err(StokesError::ZeroWavevector);
    }
    let kb = [k[0] / kn, k[1] / kn];
    let force = sigma_hat.0.apply([C::from(kb[0]), C::from(kb[1])]);
    let along = force[0] * kb[0] + force[1] * kb[1];
    let u_hat = [
        (force[0] - along * kb[0]) * I / kn,
        (force[1] - along * kb[1]) * I / kn,
    ];
    let mut grad = [[ZERO; 2]; 2];
    for (i, row) in grad.iter_mut().enumerate() {
        for (j, g) in row.iter_mut().enumerate() {
            *g = I * k[j] * u_hat[i];
        }
    }
    Ok(FlowModeSolution {
        k,
        u_hat,
        grad_u_hat: Matrix2(grad),
    })
}

/// Real stress components on an `nx × ny` torus grid, row-major in `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StressField {
    pub nx: usize,
    pub ny: usize,
    pub s11: Vec<f64>,
    pub s12: Vec<f64>,
    pub s22: Vec<f64>,
}

/// Velocity and its gradient on the torus grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowField {
    pub nx: usize,
    pub ny: usize,
    pub u: [Vec<f64>; 2],
    /// `grad[i][j] = ∂_j u_i`.
    pub grad: [[Vec<f64>; 2]; 2],
    /// Largest `|k · û|` relative to `max |k||û|` over all modes.
    pub max_divergence: f64,
}

impl FlowField {
    /// `‖∇u‖²_{L²}` over the torus `[0, 2π)²`.
    pub fn grad_l2_sq(&self) -> f64 {
        let cell = (2.0 * PI / self.nx as f64) * (2.0 * PI / self.ny as f64);
        self.grad
            .iter()
            .flatten()
            .flat_map(|g| g.iter())
            .map(|v| v * v)
            .sum::<f64>()
            * cell
    }
}

/// Solves Stokes on the torus for a physical stress field; the mean mode carries no flow.
pub fn stokes_field_solve(sigma: &StressField) -> Result<FlowField, StokesError> {
    let (nx, ny) = (sigma.nx, sigma.ny);
    let n = nx * ny;
    for comp in [&sigma.s11, &sigma.s12, &sigma.s22] {
        if comp.len() != n {
            return Err(StokesError::GridMismatch {
                got: comp.len(),
                nx,
                ny,
            });
        }
    }
    let fft = FftNd::new(&[nx, ny]);
    let to_hat = |v: &[f64]| {
        let mut buf: Vec<C> = v.iter().map(|&x| C::from(x)).collect();
        fft.forward(&mut buf);
        buf
    };
    let (h11, h12, h22) = (to_hat(&sigma.s11), to_hat(&sigma.s12), to_hat(&sigma.s22));
    let mut u = [vec![ZERO; n], vec![ZERO; n]];
    let mut grad = [
        [vec![ZERO; n], vec![ZERO; n]],
        [vec![ZERO; n], vec![ZERO; n]],
    ];
    let mut max_divergence: f64 = 0.0;
    for ix in 0..nx {
        for iy in 0..ny {
            let k = [wavenumber(ix, nx) as f64, wavenumber(iy, ny) as f64];
            let idx = ix * ny + iy;
            // Nyquist rows have no real counterpart and are dropped.
            if (k[0] == 0.0 && k[1] == 0.0)
                || (nx % 2 == 0 && ix == nx / 2)
                || (ny % 2 == 0 && iy == ny / 2)
            {
                continue;
            }
            let mode =
                stokes_mode_solve(&StressTensor::symmetric(h11[idx], h12[idx], h22[idx]), k)?;
            let scale = k[0].hypot(k[1]) * mode.u_hat.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if scale > 0.0 {
                max_divergence = max_divergence.max(mode.divergence().norm() / scale);
            }
            for i in 0..2 {
                u[i][idx] = mode.u_hat[i];
                for (j, g) in grad[i].iter_mut().enumerate() {
                    g[idx] = mode.grad_u_hat.get(i, j);
                }
            }
        }
    }
    let to_real = |mut buf: Vec<C>| {
        fft.inverse(&mut buf);
        buf.into_iter().map(|z| z.re).collect::<Vec<f64>>()
    };
    let [u0, u1] = u;
    let [[g00, g01], [g10, g11]] = grad;
    Ok(FlowField {
        nx,
        ny,
        u: [to_real(u0), to_real(u1)],
        grad: [[to_real(g00), to_real(g01)], [to_real(g10), to_real(g11)]],
        max_divergence,
    })
}
