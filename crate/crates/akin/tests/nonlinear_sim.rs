use std::f64::consts::PI;

use akin::mode::{evolve_mode, Schedule};
use akin::nonlinear::{
    entropy, init_field, mode_split, read_snapshot, run, write_snapshot, Field2D, Grid, InitKind,
    SimError, Simulator,
};
use akin::{ModelParams, OrientationSpectrum, Swimmer};
use num_complex::Complex64;
use proptest::prelude::*;

type C = Complex64;

fn params(nu: f64, kappa: f64, psi: f64, swimmer: Swimmer) -> ModelParams {
    ModelParams::planar(nu, psi, swimmer)
        .unwrap()
        .with_kappa(kappa)
}

#[test]
fn linearization_matches_mode_evolver() {
    let grid = Grid::new(8, 8, 32).unwrap();
    let eps = 1e-6;
    let p = params(0.1, 1e-3, 0.0, Swimmer::Pusher);
    let values: Vec<f64> = (0..grid.len())
        .map(|i| {
            let (x, _, th) = grid.coords(i);
            eps * (x + 2.0 * th).cos()
        })
        .collect();
    let mut f = Field2D::from_values(grid, 0.0, &values).unwrap();
    let dt = 1e-3;
    Simulator::new(&p, grid, dt).unwrap().step(&mut f).unwrap();
    let h = OrientationSpectrum::exponential(2, grid.m_max() as usize).scale(C::from(0.5 * eps));
    let traj = evolve_mode(&p, 1.0, &h, &Schedule::new(dt, dt, 1)).unwrap();
    let linear = &traj.last().state;
    for m in -grid.m_max()..=grid.m_max() {
        assert!((f.coeff(1, 0, m) - linear.coeff(m)).norm() <= 1e-10 * eps);
    }
}

#[test]
fn entropy_of_cosine_profile() {
    let grid = Grid::new(64, 8, 8).unwrap();
    let (psi_bar, eps) = (2.0, 1e-2);
    let values: Vec<f64> = (0..grid.len())
        .map(|i| psi_bar * (1.0 + eps * grid.coords(i).0.cos()))
        .collect();
    let f = Field2D::from_values(grid, psi_bar, &values).unwrap();
    // Composite Simpson on 4000 panels in x; the y and θ integrals are trivial.
    let n = 4000;
    let g = |x: f64| {
        let r = 1.0 + eps * x.cos();
        r * r.ln()
    };
    let h = 2.0 * PI / n as f64;
    let simpson: f64 = (0..=n)
        .map(|j| {
            let w = if j == 0 || j == n {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * g(j as f64 * h)
        })
        .sum::<f64>()
        * h
        / 3.0;
    let oracle = 4.0 * PI * PI * simpson;
    let s = entropy(&f);
    assert_eq!(s.clamps, 0);
    assert!(
        (s.value - oracle).abs() / oracle < 1e-6,
        "{} vs {oracle}",
        s.value
    );
    let leading = (2.0 * PI).powi(3) * eps * eps / 4.0;
    assert!((s.value - leading).abs() / leading < 2.0 * eps * eps);
}

#[test]
fn entropy_nonnegative_on_random_fields() {
    let grid = Grid::new(16, 16, 16).unwrap();
    for seed in 0..100 {
        let f = init_field(&InitKind::RandomSmooth, 0.9, 1.0, seed, grid).unwrap();
        assert!(entropy(&f).value >= 0.0);
    }
}

#[test]
fn x_independent_field_has_no_nonzero_modes() {
    let grid = Grid::new(16, 16, 16).unwrap();
    let values: Vec<f64> = (0..grid.len())
        .map(|i| 1.0 + 0.3 * (2.0 * grid.coords(i).2).sin())
        .collect();
    let split = mode_split(&Field2D::from_values(grid, 1.0, &values).unwrap());
    assert_eq!(split.fneq_l2, 0.0);
    assert!(split.f0_l2 > 0.0);
}

#[test]
fn runs_are_deterministic() {
    let grid = Grid::new(16, 16, 16).unwrap();
    let p = params(0.1, 0.1, 1.0, Swimmer::Pusher);
    let go = || {
        let f = init_field(&InitKind::RandomSmooth, 0.5, 1.0, 9, grid).unwrap();
        run(f, &p, &Schedule::new(0.2, 0.01, 5)).unwrap()
    };
    assert_eq!(go(), go());
}

#[test]
fn snapshot_through_a_file() {
    let grid = Grid::new(16, 16, 16).unwrap();
    let p = params(0.1, 0.1, 1.0, Swimmer::Puller);
    let f = init_field(&InitKind::RandomSmooth, 0.5, 1.0, 4, grid).unwrap();
    let traj = run(f, &p, &Schedule::new(0.1, 0.01, 10)).unwrap();
    let path = std::env::temp_dir().join(format!("akin-snapshot-{}.bin", std::process::id()));
    write_snapshot(std::fs::File::create(&path).unwrap(), &traj.field).unwrap();
    let back = read_snapshot(std::fs::File::open(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(back.t, traj.field.t);
    let err = back
        .coeffs()
        .iter()
        .zip(traj.field.coeffs())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(err < 1e-14);
}

#[test]
fn oversized_step_is_rejected() {
    let grid = Grid::new(16, 16, 16).unwrap();
    let p = params(0.1, 0.1, 1.0, Swimmer::Puller);
    let f = init_field(&InitKind::RandomSmooth, 0.5, 1.0, 1, grid).unwrap();
    assert!(
        matches!(run(f, &p, &Schedule::new(2.0, 1.0, 1)), Err(SimError::CflViolation { t, .. }) if t == 0.0)
    );
}

#[test]
fn runaway_growth_is_detected() {
    let grid = Grid::new(8, 8, 32).unwrap();
    let p = params(0.01, 0.01, 5.0, Swimmer::Pusher);
    let f = init_field(
        &InitKind::SingleMode { k: [1, 0], m: 2 },
        1e-10,
        5.0,
        0,
        grid,
    )
    .unwrap();
    assert!(matches!(
        run(f, &p, &Schedule::new(200.0, 0.05, 100)),
        Err(SimError::BlowupDetected { .. })
    ));
}

#[test]
fn mismatched_background_is_rejected() {
    let grid = Grid::new(8, 8, 8).unwrap();
    let p = params(0.1, 0.1, 1.0, Swimmer::Puller);
    let f = Field2D::uniform(grid, 2.0);
    assert!(matches!(
        run(f, &p, &Schedule::new(0.1, 0.01, 1)),
        Err(SimError::PsiBarMismatch { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn single_modes_are_mean_free(kx in -2i64..=2, ky in -2i64..=2, m in -2i64..=2, eps in 0.0f64..0.5) {
        prop_assume!(kx != 0 || ky != 0 || m != 0);
        let grid = Grid::new(8, 8, 8).unwrap();
        let f = init_field(&InitKind::SingleMode { k: [kx, ky], m }, eps, 1.0, 0, grid).unwrap();
        let mean = f.perturbation_values().iter().sum::<f64>() / grid.len() as f64;
        prop_assert!(mean.abs() < 1e-14);
        prop_assert!(f.hermitian_defect() < 1e-15);
    }

    #[test]
    fn pythagoras(seed in 0u64..1000, eps in 0.0f64..1.0) {
        let grid = Grid::new(16, 16, 16).unwrap();
        let f = init_field(&InitKind::RandomSmooth, eps, 1.0, seed, grid).unwrap();
        let total: f64 = f.perturbation_values().iter().map(|v| v * v).sum::<f64>() * grid.cell_volume();
        let s = mode_split(&f);
        let parts = s.f0_l2 * s.f0_l2 + s.fneq_l2 * s.fneq_l2;
        prop_assert!((total - parts).abs() <= 1e-12 * total.max(1e-300));
        let by_k: f64 = s.energies.iter().map(|(_, e)| e).sum();
        prop_assert!((by_k - parts).abs() <= 1e-12 * total.max(1e-300));
    }

    #[test]
    fn mass_is_conserved(seed in 0u64..100, iota in prop::bool::ANY) {
        let grid = Grid::new(16, 16, 16).unwrap();
        let swimmer = if iota { Swimmer::Puller } else { Swimmer::Pusher };
        let p = params(0.1, 0.1, 1.0, swimmer);
        let f = init_field(&InitKind::RandomSmooth, 0.5, 1.0, seed, grid).unwrap();
        let traj = run(f, &p, &Schedule::new(0.1, 0.01, 5)).unwrap();
        let m0 = traj.samples[0].mass;
        prop_assert!(traj.samples.iter().all(|s| ((s.mass - m0) / m0).abs() < 1e-12));
    }
}
