use akin::mode::{enhanced_rate_with, lambda_nu_k, taylor_rate_with, RateOptions};
use akin::{ModelParams, Swimmer};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, SweepKind};
use crate::error::CliError;
use crate::output::Artifacts;
use crate::seeds::{random_spectrum, task_seed};

/// One line of `sweep.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub nu: f64,
    pub k: f64,
    pub psi_bar: f64,
    pub iota: f64,
    pub fitted_rate: f64,
    pub lambda_theory: f64,
    pub ratio: f64,
    pub r_squared: f64,
    pub t_end: f64,
    pub seed: u64,
}

struct Task {
    params: ModelParams,
    k: f64,
    seed: u64,
}

fn theory(kind: SweepKind, p: &ModelParams, k: f64) -> f64 {
    match kind {
        SweepKind::Enhanced => lambda_nu_k(p.nu, k),
        SweepKind::Taylor => k * k / (2.0 * p.nu) + p.kappa * k * k,
    }
}

fn horizon(kind: SweepKind, p: &ModelParams, k: f64, rate: f64) -> f64 {
    match kind {
        SweepKind::Enhanced => 3.0 / rate + 16.0 / (p.nu * k).sqrt(),
        SweepKind::Taylor => 3.0 / p.nu + 8.0 / rate,
    }
}

fn run_task(cfg: &ExperimentConfig, task: &Task) -> Result<SweepRow, CliError> {
    let sc = &cfg.sweep;
    let p = &task.params;
    let lambda = theory(sc.kind, p, task.k);
    let t_end = sc
        .t_end
        .unwrap_or_else(|| horizon(sc.kind, p, task.k, lambda));
    let opts = RateOptions {
        order: sc.order,
        dt: sc.dt,
        samples: sc.samples,
        initial: sc
            .random_initial
            .then(|| random_spectrum(sc.order, task.seed)),
    };
    let fit = match sc.kind {
        SweepKind::Enhanced => enhanced_rate_with(p, task.k, t_end, &opts)?.0.fit,
        SweepKind::Taylor => taylor_rate_with(p, task.k, t_end, &opts)?,
    };
    let rate = fit.decay_rate();
    Ok(SweepRow {
        nu: p.nu,
        k: task.k,
        psi_bar: p.psi_bar,
        iota: p.iota(),
        fitted_rate: rate,
        lambda_theory: lambda,
        ratio: rate / lambda,
        r_squared: fit.r_squared,
        t_end,
        seed: task.seed,
    })
}

pub fn run(cfg: &ExperimentConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let base = cfg.resolve_model()?;
    let sc = &cfg.sweep;
    let psis = sc.psi_bar.clone().unwrap_or_else(|| vec![base.psi_bar]);
    let swimmers: Vec<Swimmer> = sc.swimmer.clone().unwrap_or_else(|| vec![base.swimmer]);
    if sc.nu.is_empty() || sc.k.is_empty() || psis.is_empty() || swimmers.is_empty() {
        return Err(CliError::Config(
            "every sweep axis needs at least one value".into(),
        ));
    }
    let mut tasks = Vec::new();
    for &nu in &sc.nu {
        for &k in &sc.k {
            if !(nu > 0.0 && k > 0.0) {
                return Err(CliError::Config(format!(
                    "sweep points need ν > 0 and k > 0, got ν = {nu}, k = {k}"
                )));
            }
            for &psi in &psis {
                for &swimmer in &swimmers {
                    let params = ModelParams::new(base.d, nu, base.kappa, psi, swimmer)?;
                    let seed = task_seed(cfg.seed, tasks.len());
                    tasks.push(Task { params, k, seed });
                }
            }
        }
    }
    // Collected in task order, so the first failure reported does not depend on scheduling.
    let results: Vec<Result<SweepRow, CliError>> =
        tasks.par_iter().map(|t| run_task(cfg, t)).collect();
    let rows = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    out.write_csv("sweep.csv", rows)?;
    Ok(())
}
