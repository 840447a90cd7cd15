//! Roots of the dispersion relation `1 + ι d ψ̄ γ₂(λ) = 0` in the closed right half-plane.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gamma::{fourth_moment, gamma_j};
use super::DispersionError;
use crate::params::{Dimension, Swimmer};

type C = Complex64;

/// Residual bound `|1 + ι d ψ̄ γ(λ)|` for an accepted root.
pub const ROOT_RESIDUAL: f64 = 1e-10;
/// Roots closer than this are merged.
pub const DEDUP_DISTANCE: f64 = 1e-6;
const MAX_NEWTON: usize = 80;
/// Iterates pushed closer than this to the imaginary axis are abandoned.
const MIN_RE: f64 = 1e-11;

/// Rectangle of Newton seeds in the `λ` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub re: (f64, f64),
    pub im: (f64, f64),
    pub seeds_re: usize,
    pub seeds_im: usize,
}

impl Default for SearchBox {
    fn default() -> Self {
        Self {
            re: (0.0, 5.0),
            im: (-2.0, 2.0),
            seeds_re: 11,
            seeds_im: 11,
        }
    }
}

impl SearchBox {
    fn seeds(&self) -> Vec<C> {
        let lerp = |(a, b): (f64, f64), i: usize, n: usize| {
            if n <= 1 {
                a
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(self.seeds_re * self.seeds_im);
        for i in 0..self.seeds_re {
            // Seeds on the axis itself would start in the boundary regime.
            let re = lerp(self.re, i, self.seeds_re).max(1e-2);
            for j in 0..self.seeds_im {
                out.push(C::new(re, lerp(self.im, j, self.seeds_im)));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub re: f64,
    pub im: f64,
    pub residual: f64,
}

impl Root {
    pub fn lambda(&self) -> C {
        C::new(self.re, self.im)
    }
}

/// Seed bookkeeping for a root search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SearchStats {
    pub seeds: usize,
    pub converged: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionReport {
    pub psi_bar: f64,
    pub iota: f64,
    pub d: u32,
    /// Sorted by decreasing real part, then decreasing imaginary part.
    pub roots: Vec<Root>,
    pub psi_star: Option<f64>,
    pub stats: SearchStats,
}

impl DispersionReport {
    /// The root of largest real part, if any.
    pub fn dominant(&self) -> Option<&Root> {
        self.roots.first()
    }
}

/// The relation `R(λ) = 1 + c·γ(λ)` with coupling `c = ι d ψ̄`.
#[derive(Debug, Clone, Copy)]
struct Relation {
    coupling: f64,
    d: Dimension,
}

impl Relation {
    fn eval(&self, lambda: C) -> Result<(C, C), DispersionError> {
        let g = gamma_j(lambda, self.d, 2)?;
        Ok((1.0 + g.value * self.coupling, g.derivative * self.coupling))
    }

    fn newton(&self, seed: C) -> Option<Root> {
        let mut lam = seed;
        for _ in 0..MAX_NEWTON {
            let (r, dr) = self.eval(lam).ok()?;
            if r.norm() <= ROOT_RESIDUAL {
                return Some(Root {
                    re: lam.re,
                    im: lam.im,
                    residual: r.norm(),
                });
            }
            if dr.norm() == 0.0 {
                return None;
            }
            let mut step = r / dr;
            let cap = lam.norm().max(1.0);
            if step.norm() > cap {
                step *= cap / step.norm();
            }
            let mut next = lam - step;
            // Stay in the half-plane where γ is defined by the integral.
            if next.re < 0.0 {
                next.re = 0.5 * lam.re;
            }
            if next.re < MIN_RE || !next.re.is_finite() || !next.im.is_finite() || next.norm() > 1e8
            {
                return None;
            }
            lam = next;
        }
        None
    }

    fn seeds(&self, search: &SearchBox) -> Vec<C> {
        let mut seeds = search.seeds();
        // The large-λ balance γ ≈ m/λ puts a real root near -c·m when c < 0.
        if self.coupling < 0.0 {
            seeds.push(C::new(-self.coupling * fourth_moment(self.d), 0.0));
        }
        seeds
    }
}

/// Finds dispersion-relation roots with `Re λ >= 0` by Newton iteration from the seeds of
/// `search`. Seeds that fail to converge are counted and dropped.
pub fn find_roots(
    psi_bar: f64,
    swimmer: Swimmer,
    d: Dimension,
    search: &SearchBox,
) -> Result<DispersionReport, DispersionError> {
    if !(psi_bar > 0.0) || !psi_bar.is_finite() {
        return Err(DispersionError::PsiBar(psi_bar));
    }
    let rel = Relation {
        coupling: swimmer.sign() * d.as_f64() * psi_bar,
        d,
    };
    let seeds = rel.seeds(search);
    let found: Vec<Option<Root>> = seeds.par_iter().map(|&s| rel.newton(s)).collect();
    let converged: Vec<Root> = found.iter().flatten().copied().collect();
    let stats = SearchStats {
        seeds: seeds.len(),
        converged: converged.len(),
        failed: seeds.len() - converged.len(),
    };
    Ok(DispersionReport {
        psi_bar,
        iota: swimmer.sign(),
        d: d.value(),
        roots: dedup(converged),
        psi_star: None,
        stats,
    })
}

fn dedup(mut roots: Vec<Root>) -> Vec<Root> {
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    let mut out: Vec<Root> = Vec::new();
    for r in roots {
        if !out.iter().any(|q| {
            (q.lambda() - r.lambda()).norm() <= DEDUP_DISTANCE * r.lambda().norm().max(1.0)
        }) {
            out.push(r);
        }
    }
    out
}

/// Onset of instability for pushers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub psi_star: f64,
    /// Root with `Im λ >= 0` closest to the imaginary axis at the upper bracket end.
    pub marginal_root: Root,
    pub bracket: (f64, f64),
    pub bisections: usize,
}

/// Bracket searched for the pusher threshold.
pub const THRESHOLD_BRACKET: (f64, f64) = (1e-3, 1e3);
/// Relative width at which bisection stops.
pub const THRESHOLD_WIDTH: f64 = 1e-6;

/// Relative bracket width below which bisection switches from the seed grid to continuing
/// the roots found at the upper end.
const CONTINUATION_WIDTH: f64 = 1e-2;

/// Smallest `ψ̄` for which a pusher suspension has an eigenvalue with `Re λ >= 0`,
/// bracketed by bisection on `ψ̄`.
pub fn penrose_threshold(d: Dimension, search: &SearchBox) -> Result<Threshold, DispersionError> {
    let grid_roots = |psi: f64| -> Result<Vec<Root>, DispersionError> {
        Ok(find_roots(psi, Swimmer::Pusher, d, search)?.roots)
    };
    let (mut lo, mut hi) = THRESHOLD_BRACKET;
    if !grid_roots(lo)?.is_empty() {
        return Err(DispersionError::Bracket { lo, hi });
    }
    let mut tracked = grid_roots(hi)?;
    if tracked.is_empty() {
        return Err(DispersionError::Bracket { lo, hi });
    }
    let mut bisections = 0;
    while (hi - lo) > CONTINUATION_WIDTH * hi {
        let mid = (lo * hi).sqrt();
        let roots = grid_roots(mid)?;
        if roots.is_empty() {
            lo = mid;
        } else {
            hi = mid;
            tracked = roots;
        }
        bisections += 1;
    }
    // Near the threshold the unstable roots approach the axis and are reached from the
    // previous upper-end roots rather than from the coarse seed grid.
    while (hi - lo) > THRESHOLD_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        let rel = Relation {
            coupling: -d.as_f64() * mid,
            d,
        };
        let roots: Vec<Root> = tracked
            .iter()
            .filter_map(|r| rel.newton(r.lambda()))
            .collect();
        if roots.is_empty() {
            lo = mid;
        } else {
            hi = mid;
            tracked = dedup(roots);
        }
        bisections += 1;
    }
    let marginal_root = tracked
        .iter()
        .filter(|r| r.im >= 0.0)
        .min_by(|a, b| a.re.total_cmp(&b.re))
        .or(tracked.first())
        .copied()
        .ok_or(DispersionError::Bracket { lo, hi })?;
    Ok(Threshold {
        psi_star: 0.5 * (lo + hi),
        marginal_root,
        bracket: (lo, hi),
        bisections,
    })
}

/// Root report for `psi_bar` with the pusher threshold attached when `swimmer` is a pusher.
pub fn dispersion_report(
    psi_bar: f64,
    swimmer: Swimmer,
    d: Dimension,
    search: &SearchBox,
) -> Result<DispersionReport, DispersionError> {
    let mut report = find_roots(psi_bar, swimmer, d, search)?;
    if swimmer == Swimmer::Pusher {
        report.psi_star = Some(penrose_threshold(d, search)?.psi_star);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pullers_are_stable() {
        for psi in [0.5, 5.0, 50.0] {
            let r =
                find_roots(psi, Swimmer::Puller, Dimension::Two, &SearchBox::default()).unwrap();
            assert!(r.roots.is_empty(), "ψ̄ = {psi}: {:?}", r.roots);
        }
    }

    #[test]
    fn dilute_pushers_are_stable() {
        let r = find_roots(1e-3, Swimmer::Pusher, Dimension::Two, &SearchBox::default()).unwrap();
        assert!(r.roots.is_empty());
    }

    #[test]
    fn dense_pushers_have_conjugate_roots() {
        let r = find_roots(0.5, Swimmer::Pusher, Dimension::Two, &SearchBox::default()).unwrap();
        let top = r.dominant().unwrap();
        assert!(top.re > 0.0 && top.residual <= ROOT_RESIDUAL);
        assert!(r
            .roots
            .iter()
            .any(|q| (q.lambda() - top.lambda().conj()).norm() < 1e-8));
    }

    #[test]
    fn rejects_nonpositive_concentration() {
        assert!(matches!(
            find_roots(0.0, Swimmer::Pusher, Dimension::Two, &SearchBox::default()),
            Err(DispersionError::PsiBar(_))
        ));
    }
}
