use akin::fit::{fit_exponential, RateFit};
use akin::mode::Schedule;
use akin::nonlinear::{init_field, run_observed, write_snapshot, Field2D, Grid};
use akin::ModelParams;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::Artifacts;

#[derive(Serialize)]
struct Summary {
    params: ModelParams,
    grid: [usize; 3],
    dt: f64,
    steps: usize,
    samples: usize,
    t_final: f64,
    /// Largest `|M(t) - M(0)|`, relative when `M(0) > 1`.
    mass_drift: f64,
    h_theorem_residual: f64,
    entropy_initial: f64,
    entropy_final: f64,
    entropy_clamps: usize,
    min_psi: f64,
    f0_norm_initial: f64,
    f0_norm_final: f64,
    fneq_norm_initial: f64,
    fneq_norm_final: f64,
    /// Exponential fit of `‖f_≠‖` over the second half of the run, when it is defined.
    fneq_fit: Option<RateFit>,
}

fn snapshot_bytes(field: &Field2D) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write_snapshot(&mut buf, field)?;
    Ok(buf)
}

pub fn run(cfg: &ExperimentConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let p = cfg.resolve_model()?;
    let sc = &cfg.simulate;
    let [nx, ny, nt] = sc.grid;
    let grid = Grid::new(nx, ny, nt)?;
    let field = init_field(&sc.init, sc.amplitude, p.psi_bar, cfg.seed, grid)?;
    let schedule = Schedule::new(sc.t_end, sc.dt, sc.sample_every.max(1));

    // Snapshots are buffered and written after the run returns.
    let mut snapshots: Vec<(String, Vec<u8>)> = Vec::new();
    let mut snapshot_error = None;
    let mut sample = 0usize;
    let traj = run_observed(field, &p, &schedule, |f, _| {
        if sc.snapshot_every > 0 && sample.is_multiple_of(sc.snapshot_every) {
            match snapshot_bytes(f) {
                Ok(b) => snapshots.push((format!("snapshots/snapshot_{sample:06}.akin"), b)),
                Err(e) => snapshot_error = snapshot_error.take().or(Some(e)),
            }
        }
        sample += 1;
    })?;
    if let Some(e) = snapshot_error {
        return Err(e);
    }
    for (name, bytes) in &snapshots {
        out.write_bytes(name, bytes)?;
    }
    out.write_bytes("final.akin", &snapshot_bytes(&traj.field)?)?;
    out.write_csv("diagnostics.csv", &traj.samples)?;

    let first = &traj.samples[0];
    let last = traj
        .samples
        .last()
        .expect("the initial sample is always recorded");
    let t_final = last.t;
    let fneq_fit = if traj.samples.iter().all(|s| s.fneq_norm > 0.0) && traj.samples.len() >= 4 {
        fit_exponential(&traj.times(), &traj.fneq_norms(), (0.5 * t_final, t_final)).ok()
    } else {
        None
    };
    out.write_json(
        "simulate.json",
        &Summary {
            params: p,
            grid: sc.grid,
            dt: sc.dt,
            steps: schedule.steps(),
            samples: traj.samples.len(),
            t_final,
            mass_drift: traj
                .samples
                .iter()
                .map(|s| (s.mass - first.mass).abs() / first.mass.abs().max(1.0))
                .fold(0.0, f64::max),
            h_theorem_residual: traj.h_theorem_residual(),
            entropy_initial: first.entropy,
            entropy_final: last.entropy,
            entropy_clamps: traj.samples.iter().map(|s| s.entropy_clamps).sum(),
            min_psi: traj
                .samples
                .iter()
                .map(|s| s.min_psi)
                .fold(f64::INFINITY, f64::min),
            f0_norm_initial: first.f0_norm,
            f0_norm_final: last.f0_norm,
            fneq_norm_initial: first.fneq_norm,
            fneq_norm_final: last.fneq_norm,
            fneq_fit,
        },
    )?;
    Ok(())
}
