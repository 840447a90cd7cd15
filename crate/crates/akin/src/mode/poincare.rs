//! Sharp constant in `k²‖h‖² ≤ c (k^{3/2}ν^{1/2}‖∂_θh‖² + k^{1/2}ν^{-1/2}‖k sin θ h‖²)`
//! on the space of orientation modes `|m| ≤ M`.
//!
//! The right side is `2π hᴴBh` with `B = αD² + βS`, where `D² = diag(m²)` and `S` is
//! multiplication by `sin²θ`, which only couples `m` to `m ± 2`. Each parity class of `m`
//! is therefore a symmetric tridiagonal problem, solved by inverse iteration.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ModeError;
use crate::spectral::OrientationSpectrum;

const MAX_ITERATIONS: usize = 2000;
const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoincareEstimate {
    pub c0: f64,
    /// Normalized maximizer of the Rayleigh quotient.
    pub extremal: OrientationSpectrum,
    pub residual: f64,
    pub iterations: usize,
}

/// One parity chain `m = m₀, m₀+2, …` as a real symmetric tridiagonal matrix.
struct Chain {
    modes: Vec<i64>,
    diag: Vec<f64>,
    off: f64,
}

impl Chain {
    fn new(parity: i64, order: usize, alpha: f64, beta: f64) -> Self {
        let m_max = order as i64;
        let modes: Vec<i64> = (-m_max..=m_max)
            .filter(|m| (m - parity).rem_euclid(2) == 0)
            .collect();
        let diag = modes
            .iter()
            .map(|&m| alpha * (m * m) as f64 + 0.5 * beta)
            .collect();
        Self {
            modes,
            diag,
            off: -0.25 * beta,
        }
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.off * x[i - 1];
                }
                if i + 1 < n {
                    v += self.off * x[i + 1];
                }
                v
            })
            .collect()
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let mut c = vec![0.0; n];
        let mut x = rhs.to_vec();
        let mut piv = self.diag[0];
        x[0] /= piv;
        for i in 1..n {
            c[i - 1] = self.off / piv;
            piv = self.diag[i] - self.off * c[i - 1];
            x[i] = (x[i] - self.off * x[i - 1]) / piv;
        }
        for i in (0..n - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        x
    }

    /// Smallest eigenpair with the relative residual reached.
    fn lowest(&self) -> Result<(f64, Vec<f64>, f64, usize), ModeError> {
        let n = self.modes.len();
        let normalize = |v: &mut Vec<f64>| {
            let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= s);
        };
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 1e-3 * (i as f64).sin()).collect();
        normalize(&mut x);
        let mut residual = f64::INFINITY;
        for it in 1..=MAX_ITERATIONS {
            x = self.solve(&x);
            normalize(&mut x);
            let bx = self.apply(&x);
            let rho: f64 = bx.iter().zip(&x).map(|(a, b)| a * b).sum();
            residual = bx
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - rho * b).powi(2))
                .sum::<f64>()
                .sqrt()
                / rho.abs();
            if residual <= RESIDUAL_TOL {
                return Ok((rho, x, residual, it));
            }
        }
        Err(ModeError::NonConvergence { residual })
    }
}

/// The sharp constant together with its extremal mode.
pub fn poincare_extremal(nu: f64, k: f64, order: usize) -> Result<PoincareEstimate, ModeError> {
    if !(nu > 0.0 && nu < k) || !k.is_finite() {
        return Err(ModeError::PoincareRange { nu, k });
    }
    let alpha = k.powf(1.5) * nu.sqrt();
    let beta = k.powf(2.5) / nu.sqrt();
    let chains = [
        Chain::new(0, order, alpha, beta),
        Chain::new(1, order, alpha, beta),
    ];
    let (even, odd) = rayon::join(|| chains[0].lowest(), || chains[1].lowest());
    let (even, odd) = (even?, odd?);
    let (chain, (lam, vec, residual, iterations)) = if even.0 <= odd.0 {
        (&chains[0], even)
    } else {
        (&chains[1], odd)
    };
    let mut extremal = OrientationSpectrum::zeros(order);
    for (&m, v) in chain.modes.iter().zip(vec) {
        extremal.set(m, Complex64::from(v));
    }
    Ok(PoincareEstimate {
        c0: k * k / lam,
        extremal,
        residual,
        iterations,
    })
}

/// Smallest `c` in the weighted Poincaré inequality at truncation `order`.
pub fn estimate_poincare_c0(nu: f64, k: f64, order: usize) -> Result<f64, ModeError> {
    poincare_extremal(nu, k, order).map(|e| e.c0)
}

/// Largest constant over a set of `(ν, k)` pairs.
pub fn sweep_poincare_c0(points: &[(f64, f64)], order: usize) -> Result<f64, ModeError> {
    points
        .par_iter()
        .map(|&(nu, k)| estimate_poincare_c0(nu, k, order))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}
