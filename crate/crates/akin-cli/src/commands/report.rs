use akin::fit::linear_regression;
use akin::mode::{lambda_nu_k, mu_nu_k};
use serde::{Deserialize, Serialize};

use super::SweepRow;
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::Artifacts;

/// A sweep row joined with the theory rates at its `(ν, k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub nu: f64,
    pub k: f64,
    pub psi_bar: f64,
    pub iota: f64,
    pub fitted_rate: f64,
    pub lambda_nu_k: f64,
    pub mu_nu_k: f64,
    pub rate_over_lambda: f64,
    pub rate_over_mu: f64,
    pub rate_over_sqrt_nu_k: f64,
}

/// Theory rates on a log-spaced `ν` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryRow {
    pub nu: f64,
    pub k: f64,
    pub lambda_nu_k: f64,
    pub mu_nu_k: f64,
    pub sqrt_nu_k: f64,
    pub taylor: f64,
}

/// Log-log slope of the fitted rate against `ν` for one `(k, ψ̄, ι)` series.
#[derive(Serialize)]
struct Series {
    k: f64,
    psi_bar: f64,
    iota: f64,
    points: usize,
    slope: Option<f64>,
    r_squared: Option<f64>,
}

#[derive(Serialize)]
struct Summary {
    source: String,
    rows: usize,
    series: Vec<Series>,
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

pub fn run(cfg: &ExperimentConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let source = cfg
        .report
        .sweep
        .clone()
        .unwrap_or_else(|| out.path("sweep.csv"));
    let mut reader = csv::Reader::from_path(&source)
        .map_err(|e| CliError::Config(format!("reading {}: {e}", source.display())))?;
    let rows: Vec<SweepRow> = reader
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(format!("parsing {}: {e}", source.display())))?;
    if rows.is_empty() {
        return Err(CliError::Config(format!(
            "{} has no rows",
            source.display()
        )));
    }

    out.write_csv(
        "report.csv",
        rows.iter().map(|r| {
            let (lambda, mu) = (lambda_nu_k(r.nu, r.k), mu_nu_k(r.nu, r.k));
            ReportRow {
                nu: r.nu,
                k: r.k,
                psi_bar: r.psi_bar,
                iota: r.iota,
                fitted_rate: r.fitted_rate,
                lambda_nu_k: lambda,
                mu_nu_k: mu,
                rate_over_lambda: r.fitted_rate / lambda,
                rate_over_mu: r.fitted_rate / mu,
                rate_over_sqrt_nu_k: r.fitted_rate / (r.nu * r.k).sqrt(),
            }
        }),
    )?;

    let nus = sorted_unique(rows.iter().map(|r| r.nu).collect());
    let ks = sorted_unique(rows.iter().map(|r| r.k).collect());
    let (lo, hi) = (nus[0].ln(), nus[nus.len() - 1].ln());
    let n = if hi > lo {
        cfg.report.curve_points.max(2)
    } else {
        1
    };
    let mut curves = Vec::with_capacity(n * ks.len());
    for &k in &ks {
        for i in 0..n {
            let nu = if n == 1 {
                nus[0]
            } else {
                (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp()
            };
            curves.push(TheoryRow {
                nu,
                k,
                lambda_nu_k: lambda_nu_k(nu, k),
                mu_nu_k: mu_nu_k(nu, k),
                sqrt_nu_k: (nu * k).sqrt(),
                taylor: k * k / (2.0 * nu),
            });
        }
    }
    out.write_csv("theory_curves.csv", curves)?;

    let mut keys: Vec<(f64, f64, f64)> = rows.iter().map(|r| (r.k, r.psi_bar, r.iota)).collect();
    keys.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
    });
    keys.dedup();
    let series = keys
        .into_iter()
        .map(|(k, psi_bar, iota)| {
            let xy: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| (r.k, r.psi_bar, r.iota) == (k, psi_bar, iota) && r.fitted_rate > 0.0)
                .map(|r| (r.nu.ln(), r.fitted_rate.ln()))
                .collect();
            let fit = linear_regression(&xy).ok();
            Series {
                k,
                psi_bar,
                iota,
                points: xy.len(),
                slope: fit.map(|f| f.0),
                r_squared: fit.map(|f| f.2),
            }
        })
        .collect();
    out.write_json(
        "report.json",
        &Summary {
            source: source.display().to_string(),
            rows: rows.len(),
            series,
        },
    )?;
    Ok(())
}
