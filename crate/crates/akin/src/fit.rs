//! Least-squares fits of exponential and power-law decay.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Minimum coefficient of determination for a fit to count as confident.
pub const MIN_R_SQUARED: f64 = 0.98;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("only {0} usable samples in the fit window")]
    TooFewPoints(usize),
    #[error("sample values and times differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitKind {
    /// `log v` against `t`.
    Exponential,
    /// `log v` against `log t`.
    Algebraic,
}

/// A straight-line fit in log coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    /// Slope of `log v`: the growth rate for exponential fits, the exponent for algebraic ones.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub kind: FitKind,
    pub samples: usize,
}

impl RateFit {
    /// `-slope`, the exponential decay rate.
    pub fn decay_rate(&self) -> f64 {
        -self.slope
    }

    pub fn is_confident(&self) -> bool {
        self.r_squared >= MIN_R_SQUARED
    }
}

/// Fits `log v = a + slope·t` over samples with `t` in `window` and `v > 0`.
pub fn fit_exponential(
    times: &[f64],
    values: &[f64],
    window: (f64, f64),
) -> Result<RateFit, FitError> {
    fit(times, values, window, FitKind::Exponential)
}

/// Fits `log v = a + slope·log t` over samples with `t` in `window`, `t > 0`, `v > 0`.
pub fn fit_power_law(
    times: &[f64],
    values: &[f64],
    window: (f64, f64),
) -> Result<RateFit, FitError> {
    fit(times, values, window, FitKind::Algebraic)
}

fn fit(
    times: &[f64],
    values: &[f64],
    window: (f64, f64),
    kind: FitKind,
) -> Result<RateFit, FitError> {
    if times.len() != values.len() {
        return Err(FitError::LengthMismatch(times.len(), values.len()));
    }
    let points: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(&t, &v)| t >= window.0 && t <= window.1 && v > 0.0 && v.is_finite())
        .filter(|(&t, _)| kind == FitKind::Exponential || t > 0.0)
        .map(|(&t, &v)| match kind {
            FitKind::Exponential => (t, v.ln()),
            FitKind::Algebraic => (t.ln(), v.ln()),
        })
        .collect();
    let (slope, intercept, r_squared) = linear_regression(&points)?;
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
        window,
        kind,
        samples: points.len(),
    })
}

/// Ordinary least squares `y = intercept + slope·x`; returns `(slope, intercept, r²)`.
pub fn linear_regression(points: &[(f64, f64)]) -> Result<(f64, f64, f64), FitError> {
    let n = points.len();
    if n < 3 {
        return Err(FitError::TooFewPoints(n));
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(FitError::TooFewPoints(1));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok((slope, my - slope * mx, r_squared))
}

/// Maxima of `|v|` over consecutive windows of length `width`, as `(t, max)` pairs.
/// Turns an oscillating signal into its envelope for decay fits.
pub fn window_maxima(times: &[f64], values: &[f64], width: f64) -> (Vec<f64>, Vec<f64>) {
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    let Some(&start) = times.first() else {
        return (ts, vs);
    };
    let mut edge = start + width;
    let mut best: Option<(f64, f64)> = None;
    for (&t, &v) in times.iter().zip(values) {
        if t >= edge {
            if let Some((bt, bv)) = best.take() {
                ts.push(bt);
                vs.push(bv);
            }
            while edge <= t {
                edge += width;
            }
        }
        if best.is_none_or(|(_, bv)| v.abs() > bv) {
            best = Some((t, v.abs()));
        }
    }
    (ts, vs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_exponential() {
        let t: Vec<f64> = (0..50).map(|i| i as f64 * 0.5).collect();
        let v: Vec<f64> = t.iter().map(|t| 3.0 * (-0.7 * t).exp()).collect();
        let f = fit_exponential(&t, &v, (2.0, 20.0)).unwrap();
        assert!((f.decay_rate() - 0.7).abs() < 1e-12);
        assert!((f.intercept - 3.0f64.ln()).abs() < 1e-10);
        assert!(f.is_confident());
        assert_eq!(f.samples, 37);
    }

    #[test]
    fn exact_power_law() {
        let t: Vec<f64> = (1..100).map(|i| i as f64).collect();
        let v: Vec<f64> = t.iter().map(|t| t.powf(-1.5)).collect();
        let f = fit_power_law(&t, &v, (10.0, 99.0)).unwrap();
        assert!((f.slope + 1.5).abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        assert_eq!(
            fit_exponential(&[1.0, 2.0], &[1.0, 0.5], (0.0, 5.0)),
            Err(FitError::TooFewPoints(2))
        );
    }

    #[test]
    fn envelope_of_cosine() {
        let t: Vec<f64> = (0..10000).map(|i| 10.0 + i as f64 * 0.01).collect();
        let v: Vec<f64> = t.iter().map(|t| t.powf(-1.5) * (3.0 * t).cos()).collect();
        let (te, ve) = window_maxima(&t, &v, 2.0 * std::f64::consts::PI);
        let f = fit_power_law(&te, &ve, (10.0, 110.0)).unwrap();
        assert!((f.slope + 1.5).abs() < 0.02, "{}", f.slope);
    }
}
