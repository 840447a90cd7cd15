//! Concentration fields on `T² × S¹` and their initial data.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SimError;
use crate::fftgrid::{index_of, wavenumber, FftNd};

type C = Complex64;

/// Sizes of the `x`, `y` and `θ` axes. The torus is `[0, 2π)²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub ntheta: usize,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, ntheta: usize) -> Result<Self, SimError> {
        for n in [nx, ny, ntheta] {
            if n < 4 || !n.is_power_of_two() {
                return Err(SimError::GridSize(n));
            }
        }
        Ok(Self { nx, ny, ntheta })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny * self.ntheta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.nx, self.ny, self.ntheta]
    }

    /// Flat index of `(ix, iy, iθ)`, row-major.
    pub fn index(&self, ix: usize, iy: usize, it: usize) -> usize {
        (ix * self.ny + iy) * self.ntheta + it
    }

    /// Largest retained `|m|` under the 2/3 rule.
    pub fn m_max(&self) -> i64 {
        (self.ntheta / 3) as i64
    }

    pub fn kx_max(&self) -> i64 {
        (self.nx / 3) as i64
    }

    pub fn ky_max(&self) -> i64 {
        (self.ny / 3) as i64
    }

    /// Whether the wavevector `(kx, ky)` and order `m` survive dealiasing.
    pub fn retains(&self, kx: i64, ky: i64, m: i64) -> bool {
        kx.abs() <= self.kx_max() && ky.abs() <= self.ky_max() && m.abs() <= self.m_max()
    }

    /// `(kx, ky, m)` for a flat spectral index.
    pub fn wavenumbers(&self, idx: usize) -> (i64, i64, i64) {
        let it = idx % self.ntheta;
        let iy = (idx / self.ntheta) % self.ny;
        let ix = idx / (self.ntheta * self.ny);
        (
            wavenumber(ix, self.nx),
            wavenumber(iy, self.ny),
            wavenumber(it, self.ntheta),
        )
    }

    pub fn spectral_index(&self, kx: i64, ky: i64, m: i64) -> usize {
        self.index(
            index_of(kx, self.nx),
            index_of(ky, self.ny),
            index_of(m, self.ntheta),
        )
    }

    /// `(2π)³ / (Nx Ny Nθ)`, the weight of one grid point.
    pub fn cell_volume(&self) -> f64 {
        (2.0 * PI).powi(3) / self.len() as f64
    }

    pub fn coords(&self, idx: usize) -> (f64, f64, f64) {
        let it = idx % self.ntheta;
        let iy = (idx / self.ntheta) % self.ny;
        let ix = idx / (self.ntheta * self.ny);
        let step = |i: usize, n: usize| 2.0 * PI * i as f64 / n as f64;
        (step(ix, self.nx), step(iy, self.ny), step(it, self.ntheta))
    }
}

/// The concentration `ψ`, stored as its Fourier coefficients over `(kx, ky, m)` with
/// `ψ(x, y, θ) = Σ ψ̂ e^{i(kx x + ky y + mθ)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field2D {
    pub grid: Grid,
    pub psi_bar: f64,
    pub t: f64,
    coeffs: Vec<C>,
}

impl Field2D {
    /// The uniform state `ψ ≡ ψ̄`.
    pub fn uniform(grid: Grid, psi_bar: f64) -> Self {
        let mut coeffs = vec![C::new(0.0, 0.0); grid.len()];
        coeffs[0] = C::from(psi_bar);
        Self {
            grid,
            psi_bar,
            t: 0.0,
            coeffs,
        }
    }

    /// From grid values, projected onto the dealiased modes.
    pub fn from_values(grid: Grid, psi_bar: f64, values: &[f64]) -> Result<Self, SimError> {
        if values.len() != grid.len() {
            return Err(SimError::Shape {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(SimError::NonFinite(i));
        }
        let mut coeffs: Vec<C> = values.iter().map(|&v| C::from(v)).collect();
        FftNd::new(&grid.dims()).forward(&mut coeffs);
        let mut field = Self {
            grid,
            psi_bar,
            t: 0.0,
            coeffs,
        };
        field.dealias();
        Ok(field)
    }

    pub fn from_coeffs(grid: Grid, psi_bar: f64, coeffs: Vec<C>) -> Result<Self, SimError> {
        if coeffs.len() != grid.len() {
            return Err(SimError::Shape {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        Ok(Self {
            grid,
            psi_bar,
            t: 0.0,
            coeffs,
        })
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [C] {
        &mut self.coeffs
    }

    pub fn coeff(&self, kx: i64, ky: i64, m: i64) -> C {
        if self.grid.retains(kx, ky, m) {
            self.coeffs[self.grid.spectral_index(kx, ky, m)]
        } else {
            C::new(0.0, 0.0)
        }
    }

    /// `ψ` on the grid, row-major in `(x, y, θ)`.
    pub fn values(&self) -> Vec<f64> {
        let mut buf = self.coeffs.clone();
        FftNd::new(&self.grid.dims()).inverse(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    }

    /// The perturbation `f = ψ - ψ̄` on the grid, without cancellation against `ψ̄`.
    pub fn perturbation_values(&self) -> Vec<f64> {
        let mut buf = self.coeffs.clone();
        buf[0] -= self.psi_bar;
        FftNd::new(&self.grid.dims()).inverse(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    }

    /// Zeroes every mode removed by the 2/3 rule.
    pub fn dealias(&mut self) {
        let grid = self.grid;
        for (idx, c) in self.coeffs.iter_mut().enumerate() {
            let (kx, ky, m) = grid.wavenumbers(idx);
            if !grid.retains(kx, ky, m) {
                *c = C::new(0.0, 0.0);
            }
        }
    }

    /// Largest `|ψ̂(k, m) - conj ψ̂(-k, -m)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let grid = self.grid;
        (0..grid.len())
            .map(|idx| {
                let (kx, ky, m) = grid.wavenumbers(idx);
                (self.coeffs[idx] - self.coeff(-kx, -ky, -m).conj()).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `‖ψ - ψ̄‖` in `L²(T² × S¹)`.
    pub fn perturbation_l2(&self) -> f64 {
        let sum: f64 = self
            .coeffs
            .iter()
            .skip(1)
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            + (self.coeffs[0] - self.psi_bar).norm_sqr();
        ((2.0 * PI).powi(3) * sum).sqrt()
    }
}

/// Shape of the initial perturbation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitKind {
    /// `cos(kx x + ky y + mθ)`.
    SingleMode { k: [i64; 2], m: i64 },
    /// Random phases on a fixed spectrum over `|kx|, |ky|, |m| ≤ 4`, scaled to unit maximum.
    RandomSmooth,
    /// Grid values of the perturbation shape; the mean is removed.
    Custom { values: Vec<f64> },
}

/// Largest wavenumber in each index used by [`InitKind::RandomSmooth`].
pub const RANDOM_SMOOTH_BAND: i64 = 4;

/// `ψ = ψ̄ + ε·(zero-mass perturbation)`.
pub fn init_field(
    kind: &InitKind,
    amplitude: f64,
    psi_bar: f64,
    seed: u64,
    grid: Grid,
) -> Result<Field2D, SimError> {
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(SimError::Amplitude(amplitude));
    }
    if !(psi_bar >= 0.0) || !psi_bar.is_finite() {
        return Err(SimError::PsiBar(psi_bar));
    }
    let mut field = Field2D::uniform(grid, psi_bar);
    if amplitude == 0.0 {
        return Ok(field);
    }
    let shape = match kind {
        InitKind::SingleMode { k, m } => {
            if k[0] == 0 && k[1] == 0 && *m == 0 {
                return Err(SimError::MeanMode);
            }
            if !grid.retains(k[0], k[1], *m) {
                return Err(SimError::Unresolved { k: *k, m: *m });
            }
            let mut coeffs = vec![C::new(0.0, 0.0); grid.len()];
            coeffs[grid.spectral_index(k[0], k[1], *m)] += 0.5;
            coeffs[grid.spectral_index(-k[0], -k[1], -m)] += 0.5;
            coeffs
        }
        InitKind::RandomSmooth => random_smooth(grid, seed)?,
        InitKind::Custom { values } => {
            let mut f = Field2D::from_values(grid, 0.0, values)?;
            f.coeffs[0] = C::new(0.0, 0.0);
            f.coeffs
        }
    };
    for (c, s) in field.coeffs.iter_mut().zip(&shape) {
        *c += s * amplitude;
    }
    let min = field.values().into_iter().fold(f64::INFINITY, f64::min);
    if min < 0.0 {
        return Err(SimError::NegativeInit(min));
    }
    Ok(field)
}

fn random_smooth(grid: Grid, seed: u64) -> Result<Vec<C>, SimError> {
    let b = RANDOM_SMOOTH_BAND;
    if !grid.retains(b, b, b) {
        return Err(SimError::Unresolved { k: [b, b], m: b });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![C::new(0.0, 0.0); grid.len()];
    for kx in -b..=b {
        for ky in -b..=b {
            for m in -b..=b {
                // One draw per conjugate pair, taken from the positive half of the lattice.
                if (kx, ky, m) <= (0, 0, 0) {
                    continue;
                }
                let amp = 1.0 / (1 + kx * kx + ky * ky + m * m) as f64;
                let c = C::from_polar(amp, rng.gen_range(0.0..2.0 * PI));
                coeffs[grid.spectral_index(kx, ky, m)] = c;
                coeffs[grid.spectral_index(-kx, -ky, -m)] = c.conj();
            }
        }
    }
    let mut values = coeffs.clone();
    FftNd::new(&grid.dims()).inverse(&mut values);
    let peak = values.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    Ok(coeffs.into_iter().map(|c| c / peak).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::new(16, 16, 16).unwrap()
    }

    #[test]
    fn zero_amplitude_is_uniform() {
        let f = init_field(&InitKind::RandomSmooth, 0.0, 2.0, 1, grid()).unwrap();
        assert!(f.values().iter().all(|&v| v == 2.0));
    }

    #[test]
    fn single_mode_has_zero_mass() {
        let f = init_field(
            &InitKind::SingleMode { k: [1, 0], m: 2 },
            0.3,
            1.0,
            0,
            grid(),
        )
        .unwrap();
        let mean = f.perturbation_values().iter().sum::<f64>() / grid().len() as f64;
        assert!(mean.abs() < 1e-14);
        let v = f.values();
        let (x, _, th) = grid().coords(grid().index(3, 5, 7));
        assert!((v[grid().index(3, 5, 7)] - 1.0 - 0.3 * (x + 2.0 * th).cos()).abs() < 1e-14);
    }

    #[test]
    fn seeded_draws_repeat() {
        let a = init_field(&InitKind::RandomSmooth, 0.1, 1.0, 42, grid()).unwrap();
        let b = init_field(&InitKind::RandomSmooth, 0.1, 1.0, 42, grid()).unwrap();
        let c = init_field(&InitKind::RandomSmooth, 0.1, 1.0, 43, grid()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.hermitian_defect() < 1e-15);
        let peak = a
            .perturbation_values()
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max);
        assert!((peak - 0.1).abs() < 1e-12);
    }

    #[test]
    fn rejects_negative_density() {
        assert!(matches!(
            init_field(
                &InitKind::SingleMode { k: [1, 0], m: 0 },
                2.0,
                1.0,
                0,
                grid()
            ),
            Err(SimError::NegativeInit(_))
        ));
        assert!(Grid::new(12, 16, 16).is_err());
    }
}
