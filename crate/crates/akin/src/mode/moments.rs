//! Orientation moments and the Guo interaction functional, with orientation averages
//! `⨏` taken against the normalized measure `dθ/2π`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ModeTrajectory;
use crate::spectral::OrientationSpectrum;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    /// Density `⨏ h`.
    pub rho: C,
    /// Momentum `⨏ p h`.
    pub m: [C; 2],
}

impl Moments {
    pub fn momentum_norm(&self) -> f64 {
        (self.m[0].norm_sqr() + self.m[1].norm_sqr()).sqrt()
    }
}

pub fn moments(h: &OrientationSpectrum) -> Moments {
    let (plus, minus) = (h.coeff(1), h.coeff(-1));
    Moments {
        rho: h.coeff(0),
        m: [(plus + minus) * 0.5, (minus - plus) * C::new(0.0, -0.5)],
    }
}

/// `G = Re(conj(ikϱ) m₁)/k²` for the mode `e^{ikx₁}`.
pub fn guo_functional(h: &OrientationSpectrum, k: f64) -> f64 {
    let mo = moments(h);
    ((C::new(0.0, k) * mo.rho).conj() * mo.m[0]).re / (k * k)
}

/// Slack `‖g‖² - ‖ϱ‖²/4 - νG - dG/dt` at interior samples, with `dG/dt` from centered
/// differences and `g = h - ϱ`. Nonnegative values mean the moment inequality holds.
pub fn guo_slack(traj: &ModeTrajectory) -> Vec<(f64, f64)> {
    let g: Vec<f64> = traj
        .samples
        .iter()
        .map(|s| guo_functional(&s.state, traj.k))
        .collect();
    let nu = traj.params.nu;
    (1..traj.samples.len().saturating_sub(1))
        .map(|i| {
            let s = &traj.samples[i];
            let rate = (g[i + 1] - g[i - 1]) / (traj.samples[i + 1].t - traj.samples[i - 1].t);
            let micro: f64 = s
                .state
                .modes()
                .filter(|(m, _)| *m != 0)
                .map(|(_, c)| c.norm_sqr())
                .sum();
            let rho = s.state.coeff(0).norm_sqr();
            (s.t, micro - 0.25 * rho - nu * g[i] - rate)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_cosine() {
        let one = moments(&OrientationSpectrum::constant(C::from(1.0), 4));
        assert_eq!(one.rho, C::from(1.0));
        assert_eq!(one.momentum_norm(), 0.0);
        let cos = OrientationSpectrum::from_fn(4, |t| C::from(t.cos()));
        let mo = moments(&cos);
        assert!(mo.rho.norm() < 1e-14);
        assert!((mo.m[0] - 0.5).norm() < 1e-14 && mo.m[1].norm() < 1e-14);
        assert!(guo_functional(&cos, 0.3).abs() < 1e-15);
    }

    #[test]
    fn sine_momentum() {
        let sin = OrientationSpectrum::from_fn(4, |t| C::from(t.sin()));
        let mo = moments(&sin);
        assert!((mo.m[1] - 0.5).norm() < 1e-14 && mo.m[0].norm() < 1e-14);
    }
}
