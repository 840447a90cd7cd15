//! Library values against independent closed forms, brute-force sums and Monte-Carlo.

mod common;

use std::f64::consts::PI;

use akin::dispersion::{gamma_j, kernel_k, penrose_threshold, SearchBox};
use akin::quadrature::{sphere_integral_3d, SphereQuadrature3D};
use akin::{Dimension, OrientationSpectrum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex64;

#[test]
fn gamma_matches_closed_forms() {
    let points = [
        C::new(0.5, 0.0),
        C::new(0.5, 0.3),
        C::new(0.05, -0.8),
        C::new(2.0, 3.0),
        C::new(1e-3, 0.4),
        C::new(10.0, -1.0),
    ];
    for d in [Dimension::Two, Dimension::Three] {
        for &l in &points {
            let got = gamma_j(l, d, 2).unwrap().value;
            let want = common::gamma_closed(l, d.value(), false);
            assert!(
                (got - want).norm() <= 1e-8 * want.norm().max(1.0),
                "{d:?} λ={l}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn gamma_boundary_limit_matches_continuation() {
    for d in [Dimension::Two, Dimension::Three] {
        let l = C::new(0.0, 0.3);
        let got = gamma_j(l, d, 2).unwrap().value;
        let want = common::gamma_closed(C::new(1e-12, 0.3), d.value(), false);
        assert!((got - want).norm() < 1e-6, "{got} vs {want}");
    }
}

#[test]
fn large_lambda_moments() {
    for (d, moment) in [
        (Dimension::Two, PI / 4.0),
        (Dimension::Three, 4.0 * PI / 15.0),
    ] {
        let g = gamma_j(C::new(100.0, 0.0), d, 2).unwrap().value;
        assert!((g.re * 100.0 - moment).abs() / moment < 1e-4);
    }
}

#[test]
fn real_part_nonnegative_off_axis() {
    for i in -20..=20 {
        for d in [Dimension::Two, Dimension::Three] {
            let g = gamma_j(C::new(0.5, 0.25 * i as f64), d, 2).unwrap().value;
            assert!(g.re >= 0.0);
        }
    }
}

#[test]
fn sphere_fourth_moment_by_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 400_000;
    let mut sum = 0.0;
    let mut sq = 0.0;
    for _ in 0..n {
        // Uniform on S² by normalizing a Gaussian-free cube rejection sample.
        let p = loop {
            let v: [f64; 3] = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let r2 = v.iter().map(|x| x * x).sum::<f64>();
            if r2 > 1e-6 && r2 <= 1.0 {
                let r = r2.sqrt();
                break [v[0] / r, v[1] / r, v[2] / r];
            }
        };
        let f = 4.0 * PI * p[0] * p[0] * p[1] * p[1];
        sum += f;
        sq += f * f;
    }
    let mean = sum / n as f64;
    let sigma = ((sq / n as f64 - mean * mean) / n as f64).sqrt();
    let quad = sphere_integral_3d(
        |p| C::from(p[0] * p[0] * p[1] * p[1]),
        &SphereQuadrature3D::with_degree(8),
    );
    assert!((quad.value.re - 4.0 * PI / 15.0).abs() < 1e-13);
    assert!(
        (mean - 4.0 * PI / 15.0).abs() < 4.0 * sigma,
        "{mean} ± {sigma}"
    );
}

#[test]
fn negative_sobolev_norm_against_dense_dft() {
    let t = 10.0;
    let f = |th: f64| C::from_polar(1.0, -t * th.cos());
    // Direct DFT of 1024 samples, keeping |m| ≤ 256.
    let n = 1024;
    let samples: Vec<C> = (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect();
    let mut oracle = 0.0;
    for m in -256i64..=256 {
        let c: C = samples
            .iter()
            .enumerate()
            .map(|(j, s)| s * C::from_polar(1.0, -2.0 * PI * (m * j as i64) as f64 / n as f64))
            .sum::<C>()
            / n as f64;
        oracle += c.norm_sqr() / (1.0 + (m * m) as f64);
    }
    let oracle = (2.0 * PI * oracle).sqrt();
    let got = OrientationSpectrum::from_fn(64, f).sobolev_norm(-1.0);
    assert!((got - oracle).abs() < 1e-10, "{got} vs {oracle}");
}

#[test]
fn kernel_matches_bessel_identity() {
    assert!((kernel_k(0.0, Dimension::Two).re + PI / 4.0).abs() < 1e-12);
    for t in [1.0, 5.0, 20.0] {
        assert!((kernel_k(t, Dimension::Two).re - common::kernel_oracle(t)).abs() < 1e-8);
    }
}

#[test]
fn planar_threshold_closed_form() {
    let th = penrose_threshold(Dimension::Two, &SearchBox::default()).unwrap();
    let exact = common::planar_threshold();
    assert!((th.psi_star - exact).abs() / exact < 1e-5);
    assert!((th.marginal_root.im.abs() - 0.5f64.sqrt()).abs() < 1e-2);
}
