//! Entropy, H-theorem terms and zero/nonzero mode norms.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Field2D, Flow};
use crate::fftgrid::FftNd;
use crate::params::ModelParams;
use crate::spectral::OrientationSpectrum;

type C = Complex64;

/// Positivity floor for `ψ/ψ̄` inside logarithms and Fisher informations.
pub const ENTROPY_FLOOR: f64 = 1e-12;

/// One diagnostics sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub t: f64,
    /// `∫ψ`.
    pub mass: f64,
    /// `∫(ψ/ψ̄) log(ψ/ψ̄)`.
    pub entropy: f64,
    /// `|ψ̄ dS/dt - (active + rotational + translational)|` over the run's largest
    /// right-hand side. Filled once the run is complete.
    pub h_theorem_residual: f64,
    /// `‖∇u‖_{L²(T²)}`.
    pub grad_u_l2: f64,
    /// `‖f₀‖_{L²_p}` of the `x`-average `f₀` of `f = ψ - ψ̄`.
    pub f0_norm: f64,
    /// `‖f_≠‖_{H²ₓL²_p}`.
    pub fneq_norm: f64,
    pub min_psi: f64,
    /// Grid points where `ψ/ψ̄` was raised to [`ENTROPY_FLOOR`].
    pub entropy_clamps: usize,
    /// `-ιd‖∇u‖²`.
    pub active: f64,
    /// `-ν ∫ (∂_θψ)²/ψ`.
    pub rotational: f64,
    /// `-κ ∫ |∇ₓψ|²/ψ`.
    pub translational: f64,
}

impl Diagnostics {
    /// Right side of the entropy identity `ψ̄ dS/dt = active + rotational + translational`.
    pub fn entropy_production(&self) -> f64 {
        self.active + self.rotational + self.translational
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entropy {
    pub value: f64,
    pub clamps: usize,
}

/// Relative entropy `∫ (ψ/ψ̄) log(ψ/ψ̄)`, summed as `∫[(1+x)log(1+x) - x] + ∫x` with
/// `x = f/ψ̄` so that small perturbations keep full relative precision.
pub fn entropy(field: &Field2D) -> Entropy {
    if !(field.psi_bar > 0.0) {
        return Entropy {
            value: f64::NAN,
            clamps: 0,
        };
    }
    let grid = field.grid;
    let mut clamps = 0;
    let sum: f64 = field
        .perturbation_values()
        .into_iter()
        .map(|f| {
            let mut x = f / field.psi_bar;
            if 1.0 + x < ENTROPY_FLOOR {
                clamps += 1;
                x = ENTROPY_FLOOR - 1.0;
            }
            (1.0 + x) * x.ln_1p() - x
        })
        .sum();
    let mean = (field.coeffs()[0].re - field.psi_bar) / field.psi_bar;
    Entropy {
        value: grid.cell_volume() * sum + (2.0 * PI).powi(3) * mean,
        clamps,
    }
}

fn derivative_values(
    field: &Field2D,
    fft: &FftNd,
    symbol: impl Fn(i64, i64, i64) -> f64,
) -> Vec<f64> {
    let grid = field.grid;
    let mut buf: Vec<C> = field
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let (kx, ky, m) = grid.wavenumbers(idx);
            C::i() * symbol(kx, ky, m) * c
        })
        .collect();
    fft.inverse(&mut buf);
    buf.into_iter().map(|z| z.re).collect()
}

/// Diagnostics of `field`, given the flow it generates.
pub fn diagnostics(field: &Field2D, params: &ModelParams, flow: &Flow) -> Diagnostics {
    let grid = field.grid;
    let fft = FftNd::new(&grid.dims());
    let cell = grid.cell_volume();
    let psi = field.values();
    let min_psi = psi.iter().copied().fold(f64::INFINITY, f64::min);
    let ent = entropy(field);
    let (rotational, translational) = if field.psi_bar > 0.0 {
        let floor = ENTROPY_FLOOR * field.psi_bar;
        let dt = derivative_values(field, &fft, |_, _, m| m as f64);
        let dx = derivative_values(field, &fft, |kx, _, _| kx as f64);
        let dy = derivative_values(field, &fft, |_, ky, _| ky as f64);
        let (mut rot, mut trans) = (0.0, 0.0);
        for i in 0..psi.len() {
            let p = psi[i].max(floor);
            rot += dt[i] * dt[i] / p;
            trans += (dx[i] * dx[i] + dy[i] * dy[i]) / p;
        }
        (-params.nu * cell * rot, -params.kappa * cell * trans)
    } else {
        (f64::NAN, f64::NAN)
    };
    let split = mode_split(field);
    Diagnostics {
        t: field.t,
        mass: (2.0 * PI).powi(3) * field.coeffs()[0].re,
        entropy: ent.value,
        h_theorem_residual: 0.0,
        grad_u_l2: flow.grad_l2,
        f0_norm: split.f0.l2_norm(),
        fneq_norm: split.fneq_h2,
        min_psi,
        entropy_clamps: ent.clamps,
        active: -params.iota() * params.d.as_f64() * flow.grad_l2 * flow.grad_l2,
        rotational,
        translational,
    }
}

/// Derivative at `x[j]` of the parabola through three points.
fn parabola_slope(x: [f64; 3], y: [f64; 3], at: f64) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        let (a, b) = ((i + 1) % 3, (i + 2) % 3);
        s += y[i] * ((at - x[a]) + (at - x[b])) / ((x[i] - x[a]) * (x[i] - x[b]));
    }
    s
}

/// `dS/dt` at every sample by second-order differences, one-sided at the ends.
/// Empty when there are fewer than three samples.
pub fn entropy_rates(samples: &[Diagnostics]) -> Vec<f64> {
    let n = samples.len();
    if n < 3 {
        return Vec::new();
    }
    (0..n)
        .map(|j| {
            let c = j.clamp(1, n - 2);
            let x = [samples[c - 1].t, samples[c].t, samples[c + 1].t];
            let y = [
                samples[c - 1].entropy,
                samples[c].entropy,
                samples[c + 1].entropy,
            ];
            parabola_slope(x, y, samples[j].t)
        })
        .collect()
}

/// `|ψ̄ dS/dt - RHS|` at each sample, relative to the largest `|RHS|` over the samples.
/// NaN everywhere with fewer than three samples.
pub fn h_theorem_residuals(samples: &[Diagnostics], psi_bar: f64) -> Vec<f64> {
    let rates = entropy_rates(samples);
    if rates.is_empty() {
        return vec![f64::NAN; samples.len()];
    }
    let scale = samples
        .iter()
        .map(|s| s.entropy_production().abs())
        .fold(0.0, f64::max);
    samples
        .iter()
        .zip(rates)
        .map(|(s, r)| {
            let gap = (psi_bar * r - s.entropy_production()).abs();
            if scale > 0.0 {
                gap / scale
            } else {
                gap
            }
        })
        .collect()
}

/// Projection of `f = ψ - ψ̄` onto `x`-independent and mean-free parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSplit {
    /// `x`-average of `f` as a function of `θ`.
    pub f0: OrientationSpectrum,
    /// `‖f₀‖_{L²(T²×S¹)}`.
    pub f0_l2: f64,
    /// `‖f_≠‖_{L²(T²×S¹)}`.
    pub fneq_l2: f64,
    /// `‖f_≠‖_{H²ₓL²_p}` with weight `(1 + |k|²)²`.
    pub fneq_h2: f64,
    /// `‖P_k f‖²_{L²(T²×S¹)}` for each retained wavevector.
    pub energies: Vec<([i64; 2], f64)>,
}

pub fn mode_split(field: &Field2D) -> ModeSplit {
    let grid = field.grid;
    let m_max = grid.m_max();
    let vol = (2.0 * PI).powi(3);
    let mut f0 = OrientationSpectrum::zeros(m_max as usize);
    for m in -m_max..=m_max {
        let bg = if m == 0 { field.psi_bar } else { 0.0 };
        f0.set(m, field.coeff(0, 0, m) - bg);
    }
    let mut energies = Vec::new();
    let (mut l2, mut h2) = (0.0, 0.0);
    for kx in -grid.kx_max()..=grid.kx_max() {
        for ky in -grid.ky_max()..=grid.ky_max() {
            let e = if kx == 0 && ky == 0 {
                vol * f0.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>()
            } else {
                let e = vol
                    * (-m_max..=m_max)
                        .map(|m| field.coeff(kx, ky, m).norm_sqr())
                        .sum::<f64>();
                let w = (1 + kx * kx + ky * ky) as f64;
                l2 += e;
                h2 += w * w * e;
                e
            };
            energies.push(([kx, ky], e));
        }
    }
    let f0_l2 = (vol * f0.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt();
    ModeSplit {
        f0,
        f0_l2,
        fneq_l2: l2.sqrt(),
        fneq_h2: h2.sqrt(),
        energies,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinear::{init_field, Grid, InitKind};

    #[test]
    fn uniform_field_has_zero_entropy() {
        let f = Field2D::uniform(Grid::new(8, 8, 8).unwrap(), 3.0);
        assert_eq!(
            entropy(&f),
            Entropy {
                value: 0.0,
                clamps: 0
            }
        );
    }

    #[test]
    fn split_of_pure_modes() {
        let grid = Grid::new(16, 16, 16).unwrap();
        let moving =
            init_field(&InitKind::SingleMode { k: [1, 2], m: 1 }, 0.2, 1.0, 0, grid).unwrap();
        assert_eq!(mode_split(&moving).f0_l2, 0.0);
        let still =
            init_field(&InitKind::SingleMode { k: [0, 0], m: 3 }, 0.2, 1.0, 0, grid).unwrap();
        let s = mode_split(&still);
        assert_eq!(s.fneq_l2, 0.0);
        assert!((s.f0_l2 - 0.2 * (0.5 * (2.0 * PI).powi(3)).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn one_sided_rates_are_exact_on_quadratics() {
        let samples: Vec<Diagnostics> = (0..5)
            .map(|i| {
                let t = 0.1 * i as f64;
                Diagnostics {
                    t,
                    mass: 0.0,
                    entropy: 2.0 - t + 3.0 * t * t,
                    h_theorem_residual: 0.0,
                    grad_u_l2: 0.0,
                    f0_norm: 0.0,
                    fneq_norm: 0.0,
                    min_psi: 0.0,
                    entropy_clamps: 0,
                    active: 0.0,
                    rotational: 0.0,
                    translational: 0.0,
                }
            })
            .collect();
        for (s, r) in samples.iter().zip(entropy_rates(&samples)) {
            assert!((r - (-1.0 + 6.0 * s.t)).abs() < 1e-12);
        }
    }
}
