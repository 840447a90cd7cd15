//! Quadrature rules: Gauss–Legendre, a product rule on the unit sphere, and
//! adaptive Gauss–Kronrod for vector-valued complex integrands.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("integral not resolved: estimate {value} with error {est_error:e}")]
    Unresolved { value: Complex64, est_error: f64 },
    #[error(
        "adaptive quadrature hit {intervals} intervals with error {est_error:e} above tolerance"
    )]
    Budget { intervals: usize, est_error: f64 },
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule, exact for polynomials of degree `2n - 1`.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "empty Gauss-Legendre rule");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<T>(&self, a: f64, b: f64, f: impl Fn(f64) -> T) -> T
    where
        T: std::ops::Mul<f64, Output = T> + std::iter::Sum,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(mid + half * x) * (w * half))
            .sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A point on `S²` with its quadrature weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereNode {
    pub p: [f64; 3],
    pub weight: f64,
}

/// Gauss–Legendre in `p₁` times the uniform rule in the azimuth about the `p₁` axis.
/// Weights sum to `4π`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereQuadrature3D {
    nodes: Vec<SphereNode>,
    degree: usize,
}

impl SphereQuadrature3D {
    /// A rule exact for all polynomials in `p` of total degree `<= degree`.
    pub fn with_degree(degree: usize) -> Self {
        let n_polar = degree / 2 + 1;
        let n_azimuth = degree + 1;
        let gl = GaussLegendre::new(n_polar);
        let mut nodes = Vec::with_capacity(n_polar * n_azimuth);
        for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
            let r = (1.0 - x * x).max(0.0).sqrt();
            for j in 0..n_azimuth {
                let phi = 2.0 * PI * j as f64 / n_azimuth as f64;
                nodes.push(SphereNode {
                    p: [x, r * phi.cos(), r * phi.sin()],
                    weight: w * 2.0 * PI / n_azimuth as f64,
                });
            }
        }
        Self { nodes, degree }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[SphereNode] {
        &self.nodes
    }

    fn apply(&self, f: &impl Fn([f64; 3]) -> Complex64) -> Complex64 {
        self.nodes.iter().map(|n| f(n.p) * n.weight).sum()
    }
}

/// Value of a sphere integral with the gap to a lower-degree companion rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereIntegral {
    pub value: Complex64,
    pub est_error: f64,
}

impl SphereIntegral {
    /// The value, or an error if the companion rule disagrees by more than
    /// `rel_tol` relative to `max(1, |value|)`.
    pub fn checked(self, rel_tol: f64) -> Result<Complex64, QuadratureError> {
        if self.est_error <= rel_tol * self.value.norm().max(1.0) {
            Ok(self.value)
        } else {
            Err(QuadratureError::Unresolved {
                value: self.value,
                est_error: self.est_error,
            })
        }
    }
}

/// `∫_{S²} f dp` with the unnormalized surface measure.
pub fn sphere_integral_3d(
    f: impl Fn([f64; 3]) -> Complex64,
    q: &SphereQuadrature3D,
) -> SphereIntegral {
    let value = q.apply(&f);
    let companion = SphereQuadrature3D::with_degree(q.degree.saturating_sub(4).max(1));
    let est_error = (value - companion.apply(&f)).norm();
    SphereIntegral { value, est_error }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration of `N` components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveResult<const N: usize> {
    pub value: [Complex64; N],
    pub est_error: f64,
    pub intervals: usize,
}

struct Piece<const N: usize> {
    a: f64,
    b: f64,
    value: [Complex64; N],
    error: f64,
}

fn gk15<const N: usize>(f: &impl Fn(f64) -> [Complex64; N], a: f64, b: f64) -> Piece<N> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let zero = Complex64::new(0.0, 0.0);
    let mut kron = [zero; N];
    let mut gauss = [zero; N];
    let centre = f(mid);
    for c in 0..N {
        kron[c] = centre[c] * WGK[7];
        gauss[c] = centre[c] * WG[3];
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let lo = f(mid - dx);
        let hi = f(mid + dx);
        for c in 0..N {
            let s = lo[c] + hi[c];
            kron[c] += s * WGK[j];
            if j % 2 == 1 {
                gauss[c] += s * WG[j / 2];
            }
        }
    }
    let mut error: f64 = 0.0;
    for c in 0..N {
        kron[c] *= half;
        gauss[c] *= half;
        error = error.max((kron[c] - gauss[c]).norm());
    }
    Piece {
        a,
        b,
        value: kron,
        error,
    }
}

/// Globally adaptive G7/K15 integration of a vector of complex functions over `[a, b]`.
/// Stops when the summed error estimate is below `max(abs_tol, rel_tol·‖I‖_∞)`.
pub fn adaptive_gk15<const N: usize>(
    f: impl Fn(f64) -> [Complex64; N],
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<AdaptiveResult<N>, QuadratureError> {
    let mut pieces = vec![gk15(&f, a, b)];
    loop {
        let mut total = [Complex64::new(0.0, 0.0); N];
        let mut err = 0.0;
        for p in &pieces {
            for (t, v) in total.iter_mut().zip(&p.value) {
                *t += v;
            }
            err += p.error;
        }
        let scale = total.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if err <= abs_tol.max(rel_tol * scale) {
            return Ok(AdaptiveResult {
                value: total,
                est_error: err,
                intervals: pieces.len(),
            });
        }
        if pieces.len() >= max_intervals {
            return Err(QuadratureError::Budget {
                intervals: pieces.len(),
                est_error: err,
            });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one piece");
        let p = pieces.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        pieces.push(gk15(&f, p.a, m));
        pieces.push(gk15(&f, m, p.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exactness() {
        let gl = GaussLegendre::new(7);
        assert!((gl.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for deg in 0..14 {
            let exact = if deg % 2 == 1 {
                0.0
            } else {
                2.0 / (deg as f64 + 1.0)
            };
            let v = gl.integrate(-1.0, 1.0, |x| x.powi(deg));
            assert!((v - exact).abs() < 1e-14, "degree {deg}: {v}");
        }
        let big = GaussLegendre::new(200);
        assert!((big.integrate(0.0, PI, f64::sin) - 2.0).abs() < 1e-13);
    }

    #[test]
    fn sphere_weights_sum_to_area() {
        let q = SphereQuadrature3D::with_degree(20);
        let total: f64 = q.nodes().iter().map(|n| n.weight).sum();
        assert!((total - 4.0 * PI).abs() < 4.0 * PI * 1e-13);
    }

    #[test]
    fn sphere_low_moments() {
        let q = SphereQuadrature3D::with_degree(12);
        let one = sphere_integral_3d(|_| Complex64::new(1.0, 0.0), &q);
        assert!((one.value.re - 4.0 * PI).abs() < 1e-12);
        let p1sq = sphere_integral_3d(|p| Complex64::new(p[0] * p[0], 0.0), &q);
        assert!((p1sq.value.re - 4.0 * PI / 3.0).abs() < 1e-12);
        assert!(p1sq.checked(1e-10).is_ok());
    }

    #[test]
    fn unresolved_integrand_is_reported() {
        let q = SphereQuadrature3D::with_degree(6);
        let r = sphere_integral_3d(|p| Complex64::new(0.0, -30.0 * p[0]).exp(), &q);
        assert!(matches!(
            r.checked(1e-8),
            Err(QuadratureError::Unresolved { .. })
        ));
    }

    #[test]
    fn adaptive_handles_near_singularity() {
        let eps = 1e-6;
        let r = adaptive_gk15(
            |x| [Complex64::new(1.0 / (x * x + eps * eps), 0.0)],
            -1.0,
            1.0,
            1e-12,
            1e-12,
            2000,
        )
        .unwrap();
        let exact = 2.0 * (1.0 / eps).atan() / eps;
        assert!((r.value[0].re - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn adaptive_budget_error() {
        let r = adaptive_gk15(
            |x| [Complex64::new(1.0 / x.abs().sqrt().max(1e-300), 0.0)],
            -1.0,
            1.0,
            1e-15,
            1e-15,
            8,
        );
        assert!(matches!(r, Err(QuadratureError::Budget { .. })));
    }
}
