use akin::fit::{fit_exponential, RateFit};
use akin::mode::{evolve_mode, lambda_nu_k, mu_nu_k, Schedule};
use akin::ModelParams;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::Artifacts;
use crate::seeds::initial_datum;

#[derive(Serialize)]
struct Row {
    t: f64,
    norm: f64,
    grad_norm: f64,
    sin_norm: f64,
}

#[derive(Serialize)]
struct Summary {
    params: ModelParams,
    k: f64,
    dt: f64,
    fit: RateFit,
    decay_rate: f64,
    lambda_nu_k: f64,
    mu_nu_k: f64,
    rate_over_lambda: f64,
}

pub fn run(cfg: &ExperimentConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let p = cfg.resolve_model()?;
    let mc = &cfg.mode;
    let dt = mc.dt.unwrap_or_else(|| 0.2f64.min(0.25 / mc.k));
    let h = initial_datum(mc.initial, mc.order, cfg.seed);
    let traj = evolve_mode(
        &p,
        mc.k,
        &h,
        &Schedule::new(mc.t_end, dt, mc.sample_every.max(1)),
    )?;
    let window = mc.fit_window.unwrap_or((0.5 * mc.t_end, mc.t_end));
    let fit = fit_exponential(&traj.times(), &traj.norms(), window)?;
    out.write_csv(
        "mode_trajectory.csv",
        traj.samples.iter().map(|s| Row {
            t: s.t,
            norm: s.norm,
            grad_norm: s.grad_norm,
            sin_norm: s.sin_norm,
        }),
    )?;
    let lambda = lambda_nu_k(p.nu, mc.k);
    out.write_json(
        "mode.json",
        &Summary {
            params: p,
            k: mc.k,
            dt,
            fit,
            decay_rate: fit.decay_rate(),
            lambda_nu_k: lambda,
            mu_nu_k: mu_nu_k(p.nu, mc.k),
            rate_over_lambda: fit.decay_rate() / lambda,
        },
    )?;
    Ok(())
}
