use akin::mode::{poincare_extremal, psibar_bound, HypoCoefficients};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::Artifacts;

#[derive(Serialize)]
struct Point {
    nu: f64,
    k: f64,
    c0: f64,
    residual: f64,
    iterations: usize,
}

#[derive(Serialize)]
struct Bound {
    nu: f64,
    psi_bar_max: f64,
}

#[derive(Serialize)]
struct Summary {
    d: u32,
    order: usize,
    points: Vec<Point>,
    /// Largest constant over the points; the coefficients below use it.
    c0: f64,
    coefficients: HypoCoefficients,
    /// Concentration below which the linear dynamics keep the enhanced rate.
    psi_bar_bounds: Vec<Bound>,
}

pub fn run(cfg: &ExperimentConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let pc = &cfg.poincare;
    let d = cfg.model.d;
    let pairs: Vec<(f64, f64)> = pc
        .nu
        .iter()
        .flat_map(|&nu| pc.k.iter().map(move |&k| (nu, k)))
        .collect();
    if pairs.is_empty() {
        return Err(CliError::Config(
            "poincare.nu and poincare.k must be nonempty".into(),
        ));
    }
    let results: Vec<_> = pairs
        .par_iter()
        .map(|&(nu, k)| poincare_extremal(nu, k, pc.order).map(|e| (nu, k, e)))
        .collect();
    let mut points = Vec::with_capacity(pairs.len());
    for r in results {
        let (nu, k, e) = r?;
        points.push(Point {
            nu,
            k,
            c0: e.c0,
            residual: e.residual,
            iterations: e.iterations,
        });
    }
    let c0 = points.iter().map(|p| p.c0).fold(0.0, f64::max);
    let coefficients = HypoCoefficients::new(c0, d)?;
    let mut nus = pc.nu.clone();
    nus.sort_by(f64::total_cmp);
    nus.dedup();
    let psi_bar_bounds = nus
        .iter()
        .map(|&nu| Bound {
            nu,
            psi_bar_max: psibar_bound(nu, d, &coefficients),
        })
        .collect();
    out.write_json(
        "poincare.json",
        &Summary {
            d: d.value(),
            order: pc.order,
            points,
            c0,
            coefficients,
            psi_bar_bounds,
        },
    )?;
    Ok(())
}
