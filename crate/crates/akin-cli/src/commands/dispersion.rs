use akin::dispersion::{find_roots, gamma_j, penrose_threshold, GammaRegime, Root, SearchStats};
use akin::Swimmer;
use num_complex::Complex64;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::Artifacts;

#[derive(Serialize)]
struct Summary {
    d: u32,
    swimmer: Swimmer,
    iota: f64,
    psi_bar: f64,
    /// Pusher threshold in dimension `d`.
    psi_star: f64,
    marginal_root: Root,
    threshold_bracket: (f64, f64),
    bisections: usize,
    unstable: bool,
    roots: Vec<Root>,
    /// Absent when `ψ̄ = 0`, where the relation is identically one.
    stats: Option<SearchStats>,
}

#[derive(Serialize)]
struct TraceRow {
    re: f64,
    im: f64,
    gamma_re: f64,
    gamma_im: f64,
    relation_re: f64,
    relation_im: f64,
    regime: GammaRegime,
}

pub fn run(cfg: &ExperimentConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let p = cfg.resolve_model()?;
    let dc = &cfg.dispersion;
    let threshold = penrose_threshold(p.d, &dc.search)?;
    let (roots, stats) = if p.psi_bar > 0.0 {
        let r = find_roots(p.psi_bar, p.swimmer, p.d, &dc.search)?;
        (r.roots, Some(r.stats))
    } else {
        (Vec::new(), None)
    };
    out.write_json(
        "dispersion.json",
        &Summary {
            d: p.d.value(),
            swimmer: p.swimmer,
            iota: p.iota(),
            psi_bar: p.psi_bar,
            psi_star: threshold.psi_star,
            marginal_root: threshold.marginal_root,
            threshold_bracket: threshold.bracket,
            bisections: threshold.bisections,
            unstable: !roots.is_empty(),
            roots,
            stats,
        },
    )?;
    if dc.trace {
        if !(dc.trace_re >= 0.0) || dc.trace_points < 2 {
            return Err(CliError::Config(
                "dispersion.trace_re must be nonnegative and trace_points at least 2".into(),
            ));
        }
        let (lo, hi) = dc.trace_im;
        let mut rows = Vec::with_capacity(dc.trace_points);
        for i in 0..dc.trace_points {
            let lambda = Complex64::new(
                dc.trace_re,
                lo + (hi - lo) * i as f64 / (dc.trace_points - 1) as f64,
            );
            if lambda.norm() == 0.0 {
                continue;
            }
            let g = gamma_j(lambda, p.d, 2)?;
            let rel = 1.0 + p.coupling() * g.value;
            rows.push(TraceRow {
                re: lambda.re,
                im: lambda.im,
                gamma_re: g.value.re,
                gamma_im: g.value.im,
                relation_re: rel.re,
                relation_im: rel.im,
                regime: g.regime,
            });
        }
        out.write_csv("gamma_trace.csv", rows)?;
    }
    Ok(())
}
