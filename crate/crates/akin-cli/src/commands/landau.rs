use akin::dispersion::{free_transport_decay_over, volterra_solve};
use akin::fit::RateFit;
use akin::ModelParams;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::Artifacts;
use crate::seeds::initial_datum;

#[derive(Serialize)]
struct Row {
    t: f64,
    u_re: f64,
    u_im: f64,
    grad_u_abs: f64,
    forcing_abs: f64,
}

#[derive(Serialize)]
struct Summary {
    params: ModelParams,
    t_end: f64,
    dt: f64,
    weight: f64,
    /// `∫_{T/2}^T |∇û|²⟨t⟩^w dt` over the integral on `[0, T]`.
    tail_ratio: f64,
    energy_total: f64,
    energy_tail: f64,
    slope_window: (f64, f64),
    /// Log-log decay of the free-transported datum in `H^{-1}`.
    h_minus1: RateFit,
    /// Log-log decay of the free-transported datum in `H^{-3}`.
    h_minus3: RateFit,
}

pub fn run(cfg: &ExperimentConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let p = cfg.resolve_model()?;
    let lc = &cfg.landau;
    if !(lc.t_end > 0.0) {
        return Err(CliError::Config(format!(
            "landau.t_end must be positive, got {}",
            lc.t_end
        )));
    }
    let h = initial_datum(lc.initial, lc.order, cfg.seed);
    let v = volterra_solve(&h, &p, lc.t_end, lc.dt)?;
    let t_end = v.end_time();
    let energy_total = v.weighted_energy(lc.weight, 0.0, t_end);
    let energy_tail = v.weighted_energy(lc.weight, 0.5 * t_end, t_end);
    let window = lc.slope_window.unwrap_or((0.125 * lc.t_end, lc.t_end));
    let slope_dt = 0.5f64.min((window.1 - window.0) / 16.0);
    let h_minus1 = free_transport_decay_over(&h, 1.0, window, slope_dt)?;
    let h_minus3 = free_transport_decay_over(&h, 3.0, window, slope_dt)?;
    out.write_csv(
        "landau_trajectory.csv",
        v.times
            .iter()
            .zip(&v.u)
            .zip(&v.forcing)
            .map(|((&t, u), f)| Row {
                t,
                u_re: u.re,
                u_im: u.im,
                grad_u_abs: u.norm(),
                forcing_abs: f.norm(),
            }),
    )?;
    out.write_json(
        "landau.json",
        &Summary {
            params: p,
            t_end,
            dt: lc.dt,
            weight: lc.weight,
            tail_ratio: energy_tail / energy_total,
            energy_total,
            energy_tail,
            slope_window: window,
            h_minus1,
            h_minus3,
        },
    )?;
    Ok(())
}
