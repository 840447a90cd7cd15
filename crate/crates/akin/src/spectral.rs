//! Functions on the circle stored as truncated Fourier series in the angle.
//!
//! A spectrum of order `M` holds `ĥ_m` for `m = -M..=M` and represents
//! `h(θ) = Σ ĥ_m e^{imθ}`. Norms use the unnormalized measure `dθ` on `[0, 2π)`,
//! so `‖h‖² = 2π Σ |ĥ_m|²`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Smallest truncation order accepted by [`OrientationSpectrum`].
pub const MIN_ORDER: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("coefficient vector has length {0}; expected an odd length of at least {min}", min = 2 * MIN_ORDER + 1)]
    BadLength(usize),
    #[error("coefficient for mode {0} is not finite")]
    NonFinite(i64),
    #[error("grid of {0} samples cannot resolve order {1}")]
    GridTooSmall(usize, usize),
}

/// Truncated Fourier representation of a function of the orientation angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientationSpectrum {
    coeffs: Vec<Complex64>,
}

impl OrientationSpectrum {
    /// The zero function at truncation order `order`.
    pub fn zeros(order: usize) -> Self {
        let order = order.max(MIN_ORDER);
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * order + 1],
        }
    }

    /// Builds a spectrum from coefficients ordered `m = -M..=M`.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self, SpectrumError> {
        let n = coeffs.len();
        if n.is_multiple_of(2) || n < 2 * MIN_ORDER + 1 {
            return Err(SpectrumError::BadLength(n));
        }
        let order = (n / 2) as i64;
        if let Some(i) = coeffs
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(SpectrumError::NonFinite(i as i64 - order));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut h = Self::zeros(order);
        h.set(0, value);
        h
    }

    /// The pure exponential `e^{imθ}`.
    pub fn exponential(m: i64, order: usize) -> Self {
        let order = order.max(m.unsigned_abs() as usize);
        let mut h = Self::zeros(order);
        h.set(m, Complex64::new(1.0, 0.0));
        h
    }

    /// Samples `f` on a uniform grid fine enough to avoid aliasing into `|m| <= order`
    /// and keeps the resulting coefficients.
    pub fn from_fn(order: usize, f: impl Fn(f64) -> Complex64) -> Self {
        let order = order.max(MIN_ORDER);
        let n = (4 * (order + 1)).next_power_of_two();
        let samples: Vec<Complex64> = (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect();
        Self::from_samples(&samples, order).expect("grid sized from order")
    }

    /// Coefficients of order `order` from `n` uniform samples on `[0, 2π)`.
    pub fn from_samples(samples: &[Complex64], order: usize) -> Result<Self, SpectrumError> {
        let n = samples.len();
        let order = order.max(MIN_ORDER);
        if n < 2 * order + 1 {
            return Err(SpectrumError::GridTooSmall(n, order));
        }
        let mut buf = samples.to_vec();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        let mut h = Self::zeros(order);
        for m in -(order as i64)..=order as i64 {
            let idx = m.rem_euclid(n as i64) as usize;
            h.set(m, buf[idx] * scale);
        }
        Ok(h)
    }

    /// Values at `n` uniform nodes `θ_j = 2πj/n`. Modes beyond the Nyquist limit alias.
    pub fn to_samples(&self, n: usize) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (m, c) in self.modes() {
            buf[m.rem_euclid(n as i64) as usize] += c;
        }
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        buf
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `ĥ_m`, or zero outside the stored range.
    pub fn coeff(&self, m: i64) -> Complex64 {
        let order = self.order() as i64;
        if m.abs() > order {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(m + order) as usize]
        }
    }

    /// Sets `ĥ_m`.
    ///
    /// # Panics
    /// If `|m|` exceeds the truncation order.
    pub fn set(&mut self, m: i64, value: Complex64) {
        let order = self.order() as i64;
        assert!(m.abs() <= order, "mode {m} outside order {order}");
        self.coeffs[(m + order) as usize] = value;
    }

    /// Iterates `(m, ĥ_m)` from `-M` to `M`.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let order = self.order() as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 - order, c))
    }

    /// Zero-padded or truncated copy at a new order.
    pub fn resized(&self, order: usize) -> Self {
        let mut out = Self::zeros(order);
        let keep = out.order().min(self.order()) as i64;
        for m in -keep..=keep {
            out.set(m, self.coeff(m));
        }
        out
    }

    pub fn evaluate(&self, theta: f64) -> Complex64 {
        self.modes()
            .map(|(m, c)| c * Complex64::from_polar(1.0, m as f64 * theta))
            .sum()
    }

    /// True when `ĥ_{-m} = conj(ĥ_m)` to within `tol`.
    pub fn is_real_valued(&self, tol: f64) -> bool {
        let order = self.order() as i64;
        (0..=order).all(|m| (self.coeff(-m) - self.coeff(m).conj()).norm() <= tol)
    }

    /// `⟨self, other⟩ = ∫ conj(self)·other dθ`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let order = self.order().max(other.order()) as i64;
        2.0 * PI
            * (-order..=order)
                .map(|m| self.coeff(m).conj() * other.coeff(m))
                .sum::<Complex64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0.0)
    }

    /// Fourier-weight norm `(2π Σ (1+m²)^s |ĥ_m|²)^{1/2}`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let sum: f64 = self
            .modes()
            .map(|(m, c)| (1.0 + (m * m) as f64).powf(s) * c.norm_sqr())
            .sum();
        (2.0 * PI * sum).sqrt()
    }

    /// `∂_θ h`.
    pub fn derivative(&self) -> Self {
        self.map_modes(|m, c| c * Complex64::new(0.0, m as f64))
    }

    /// `∂²_θ h`, the Laplace–Beltrami operator on the circle.
    pub fn laplace_beltrami(&self) -> Self {
        self.map_modes(|m, c| c * -((m * m) as f64))
    }

    /// `cos θ · h`, exact: the result has order `M + 1`.
    pub fn mul_cos(&self) -> Self {
        let mut out = Self::zeros(self.order() + 1);
        for (m, c) in self.modes() {
            let half = c * 0.5;
            out.add_to(m - 1, half);
            out.add_to(m + 1, half);
        }
        out
    }

    /// `sin θ · h`, exact: the result has order `M + 1`.
    pub fn mul_sin(&self) -> Self {
        let mut out = Self::zeros(self.order() + 1);
        let factor = Complex64::new(0.0, -0.5);
        for (m, c) in self.modes() {
            out.add_to(m + 1, c * factor);
            out.add_to(m - 1, -c * factor);
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        self.map_modes(|_, c| c * factor)
    }

    fn map_modes(&self, f: impl Fn(i64, Complex64) -> Complex64) -> Self {
        Self {
            coeffs: self.modes().map(|(m, c)| f(m, c)).collect(),
        }
    }

    fn add_to(&mut self, m: i64, value: Complex64) {
        let order = self.order() as i64;
        self.coeffs[(m + order) as usize] += value;
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let order = self.order().max(other.order());
        let mut out = Self::zeros(order);
        for m in -(order as i64)..=order as i64 {
            out.set(m, f(self.coeff(m), other.coeff(m)));
        }
        out
    }
}

impl Add for &OrientationSpectrum {
    type Output = OrientationSpectrum;
    fn add(self, rhs: Self) -> OrientationSpectrum {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &OrientationSpectrum {
    type Output = OrientationSpectrum;
    fn sub(self, rhs: Self) -> OrientationSpectrum {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &OrientationSpectrum {
    type Output = OrientationSpectrum;
    fn mul(self, rhs: f64) -> OrientationSpectrum {
        self.map_modes(|_, c| c * rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_norm_is_root_two_pi() {
        let h = OrientationSpectrum::constant(c(1.0, 0.0), 8);
        for s in [-3.0, -1.0, 0.0, 2.0] {
            assert!((h.sobolev_norm(s) - (2.0 * PI).sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn first_harmonic_negative_norm() {
        let h = OrientationSpectrum::exponential(1, 8);
        assert!((h.sobolev_norm(-1.0) - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn laplacian_eigenfunctions() {
        let one = OrientationSpectrum::constant(c(1.0, 0.0), 6);
        assert!(one.laplace_beltrami().l2_norm() == 0.0);
        let e2 = OrientationSpectrum::exponential(2, 6);
        let lap = e2.laplace_beltrami();
        assert_eq!(lap.coeff(2), c(-4.0, 0.0));
        assert_eq!((&lap - &e2.scale(c(-4.0, 0.0))).l2_norm(), 0.0);
    }

    #[test]
    fn sampling_round_trip() {
        let h = OrientationSpectrum::from_fn(8, |t| {
            c(t.cos() + 0.5 * (3.0 * t).sin(), (2.0 * t).cos())
        });
        assert!((h.coeff(1) - c(0.5, 0.0)).norm() < 1e-14);
        assert!((h.coeff(3) - c(0.0, -0.25)).norm() < 1e-14);
        assert!((h.coeff(-2) - c(0.0, 0.5)).norm() < 1e-14);
        let samples = h.to_samples(32);
        let back = OrientationSpectrum::from_samples(&samples, 8).unwrap();
        assert!((&back - &h).l2_norm() < 1e-13);
        assert!(
            (h.evaluate(0.3) - c(0.3f64.cos() + 0.5 * 0.9f64.sin(), 0.6f64.cos())).norm() < 1e-13
        );
    }

    #[test]
    fn multiplication_by_trig_matches_pointwise() {
        let h = OrientationSpectrum::from_fn(6, |t| c((2.0 * t).sin(), t.cos()));
        let ch = h.mul_cos();
        let sh = h.mul_sin();
        for t in [0.1, 1.3, 4.0] {
            assert!((ch.evaluate(t) - h.evaluate(t) * t.cos()).norm() < 1e-13);
            assert!((sh.evaluate(t) - h.evaluate(t) * t.sin()).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_coefficients() {
        assert_eq!(
            OrientationSpectrum::from_coeffs(vec![c(0.0, 0.0); 8]),
            Err(SpectrumError::BadLength(8))
        );
        let mut v = vec![c(0.0, 0.0); 9];
        v[5] = c(f64::NAN, 0.0);
        assert_eq!(
            OrientationSpectrum::from_coeffs(v),
            Err(SpectrumError::NonFinite(1))
        );
    }

    #[test]
    fn real_valued_flag() {
        let h = OrientationSpectrum::from_fn(5, |t| c(t.cos() + (2.0 * t).sin(), 0.0));
        assert!(h.is_real_valued(1e-14));
        assert!(!OrientationSpectrum::exponential(1, 5).is_real_valued(1e-14));
    }
}
