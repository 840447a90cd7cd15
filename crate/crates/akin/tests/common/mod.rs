//! Reference values computed independently of the library's quadrature and root finders.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

type C = Complex64;

/// `J_0(t), …, J_{n}(t)` by Miller's backward recurrence, normalized with
/// `J₀ + 2ΣJ_{2j} = 1`.
pub fn bessel_j(n: usize, t: f64) -> Vec<f64> {
    if t == 0.0 {
        let mut out = vec![0.0; n + 1];
        out[0] = 1.0;
        return out;
    }
    let start = 2 * ((t.abs() as usize + n + 40 + (10.0 * t.abs().cbrt()) as usize) / 2 + 1);
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-300;
    for j in (1..=start).rev() {
        vals[j - 1] = 2.0 * j as f64 / t * vals[j] - vals[j + 1];
        if vals[j - 1].abs() > 1e250 {
            vals.iter_mut().for_each(|v| *v *= 1e-250);
        }
    }
    let norm = vals[0] + 2.0 * (1..=start / 2).map(|j| vals[2 * j]).sum::<f64>();
    vals.truncate(n + 1);
    vals.iter().map(|v| v / norm).collect()
}

/// `2π(J₀″ + J₀⁗)(t) = π(J₄ − J₀)/4`.
pub fn kernel_oracle(t: f64) -> f64 {
    let j = bessel_j(4, t);
    PI * (j[4] - j[0]) / 4.0
}

/// Closed form of `∫_{S¹} cos²θ sin²θ/(λ + i cos θ) dθ`; with `continued`, the analytic
/// continuation across the imaginary axis inside `|Im λ| < 1`.
pub fn gamma_planar(lambda: C, continued: bool) -> C {
    let a = C::i() * lambda;
    let s = if continued && lambda.re < 0.0 && lambda.im.abs() < 1.0 {
        C::i() * (1.0 - a * a).sqrt()
    } else {
        (a - 1.0).sqrt() * (a + 1.0).sqrt()
    };
    -C::i() * (a * PI - a * a * a * (2.0 * PI) - (a * a - a * a * a * a) * (2.0 * PI) / s)
}

/// Closed form of `∫_{S²} p₁²p₂²/(λ + i p₁) dp`, continued as for [`gamma_planar`].
pub fn gamma_spatial(lambda: C, continued: bool) -> C {
    let b = C::i() * lambda;
    let mut logs = (1.0 - b).ln() - (-1.0 - b).ln();
    if continued && b.im < 0.0 && b.re.abs() < 1.0 {
        logs += C::new(0.0, 2.0 * PI);
    }
    -C::i() * PI * (b * 2.0 - (b * (2.0 / 3.0) + b * b * b * 2.0) + (b * b - b * b * b * b) * logs)
}

pub fn gamma_closed(lambda: C, d: u32, continued: bool) -> C {
    if d == 2 {
        gamma_planar(lambda, continued)
    } else {
        gamma_spatial(lambda, continued)
    }
}

/// Newton on `1 - dψ̄ γ(λ)` for pushers, with finite-difference derivative.
pub fn pusher_root(psi: f64, d: u32, seed: C) -> Option<C> {
    let f = |l: C| 1.0 - d as f64 * psi * gamma_closed(l, d, true);
    let mut lam = seed;
    for _ in 0..200 {
        let h = 1e-7;
        let df = (f(lam + h) - f(lam - h)) / (2.0 * h);
        let step = f(lam) / df;
        lam -= step;
        if !lam.re.is_finite() {
            return None;
        }
        if step.norm() < 1e-14 {
            return Some(lam);
        }
    }
    (f(lam).norm() < 1e-10).then_some(lam)
}

/// Pusher threshold by tracking the least stable root downward from `psi_hi` in steps of
/// `step` and interpolating where its real part changes sign.
pub fn sweep_threshold(d: u32, psi_hi: f64, step: f64) -> f64 {
    // Locate the upper-half-plane root of largest real part at the top of the sweep.
    let mut best: Option<C> = None;
    for i in 0..40 {
        for j in 1..30 {
            let seed = C::new(0.05 + 0.1 * i as f64, 0.05 * j as f64);
            if let Some(r) = pusher_root(psi_hi, d, seed) {
                if r.re > 0.0 && r.im > 1e-8 && best.is_none_or(|b| r.re > b.re) {
                    best = Some(r);
                }
            }
        }
    }
    let mut lam = best.expect("unstable complex root at the top of the sweep");
    let mut psi = psi_hi;
    loop {
        let next = psi - step;
        let r = pusher_root(next, d, lam).expect("root continues");
        if r.re < 0.0 {
            return psi - step * lam.re / (lam.re - r.re);
        }
        lam = r;
        psi = next;
        assert!(psi > 0.0, "no crossing found");
    }
}

/// `ψ*` for the plane, `1/(√2 π)`.
pub fn planar_threshold() -> f64 {
    1.0 / (2f64.sqrt() * PI)
}

/// Second-order eigenvalue of `-νm² - ik cos θ` bifurcating from the constant mode,
/// summed from the matrix elements of the truncated operator.
pub fn taylor_oracle(nu: f64, k: f64, order: i64) -> f64 {
    let coupling = |m: i64| {
        if m.abs() == 1 {
            C::new(0.0, -0.5 * k)
        } else {
            C::new(0.0, 0.0)
        }
    };
    let shift: C = (-order..=order)
        .filter(|&m| m != 0)
        .map(|m| coupling(m) * coupling(-m) / (nu * (m * m) as f64))
        .sum();
    -shift.re
}
