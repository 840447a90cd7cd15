//! Multi-dimensional complex FFTs on periodic grids.
//!
//! Layout is row-major with the last axis fastest. `forward` is normalized by
//! the number of points, so coefficients are Fourier-series amplitudes.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

/// Signed wavenumber of FFT index `i` on an `n`-point grid.
pub fn wavenumber(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Index of signed wavenumber `k` on an `n`-point grid.
pub fn index_of(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

#[derive(Clone)]
struct AxisPlans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl AxisPlans {
    fn new(planner: &mut FftPlanner<f64>, n: usize) -> Self {
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    fn get(&self, inverse: bool) -> &Arc<dyn Fft<f64>> {
        if inverse {
            &self.inverse
        } else {
            &self.forward
        }
    }
}

/// Transforms over an array of shape `dims`, any rank.
#[derive(Clone)]
pub struct FftNd {
    dims: Vec<usize>,
    plans: Vec<AxisPlans>,
}

impl std::fmt::Debug for FftNd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftNd").field("dims", &self.dims).finish()
    }
}

impl FftNd {
    pub fn new(dims: &[usize]) -> Self {
        let mut planner = FftPlanner::new();
        let plans = dims
            .iter()
            .map(|&n| AxisPlans::new(&mut planner, n))
            .collect();
        Self {
            dims: dims.to_vec(),
            plans,
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Physical values to normalized coefficients, in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, false);
        let scale = 1.0 / self.len() as f64;
        data.par_iter_mut().for_each(|z| *z *= scale);
    }

    /// Coefficients to physical values, in place.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, true);
    }

    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        assert_eq!(data.len(), self.len(), "buffer does not match grid");
        for axis in 0..self.dims.len() {
            self.transform_axis(data, axis, inverse);
        }
    }

    fn transform_axis(&self, data: &mut [Complex64], axis: usize, inverse: bool) {
        let n = self.dims[axis];
        let inner: usize = self.dims[axis + 1..].iter().product();
        let plan = self.plans[axis].get(inverse);
        if inner == 1 {
            data.par_chunks_mut(n.max(1) * 64)
                .for_each(|chunk| plan.process(chunk));
            return;
        }
        // Each outer block of n*inner values holds `inner` lines of stride `inner`.
        data.par_chunks_mut(n * inner).for_each(|block| {
            let mut lines = vec![Complex64::new(0.0, 0.0); n * inner];
            for (j, row) in block.chunks(inner).enumerate() {
                for (l, &v) in row.iter().enumerate() {
                    lines[l * n + j] = v;
                }
            }
            plan.process(&mut lines);
            for (j, row) in block.chunks_mut(inner).enumerate() {
                for (l, v) in row.iter_mut().enumerate() {
                    *v = lines[l * n + j];
                }
            }
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wavenumbers() {
        assert_eq!(
            (0..8).map(|i| wavenumber(i, 8)).collect::<Vec<_>>(),
            vec![0, 1, 2, 3, 4, -3, -2, -1]
        );
        assert_eq!(index_of(-3, 8), 5);
    }

    #[test]
    fn single_mode_3d() {
        let (nx, ny, nz) = (8, 4, 16);
        let fft = FftNd::new(&[nx, ny, nz]);
        let mut data = vec![Complex64::new(0.0, 0.0); fft.len()];
        for ix in 0..nx {
            for iy in 0..ny {
                for iz in 0..nz {
                    let phase = 2.0
                        * PI
                        * (2.0 * ix as f64 / nx as f64 - iy as f64 / ny as f64
                            + 3.0 * iz as f64 / nz as f64);
                    data[(ix * ny + iy) * nz + iz] = Complex64::from_polar(1.5, phase);
                }
            }
        }
        let orig = data.clone();
        fft.forward(&mut data);
        let hit = (index_of(2, nx) * ny + index_of(-1, ny)) * nz + index_of(3, nz);
        for (i, z) in data.iter().enumerate() {
            let expect = if i == hit { 1.5 } else { 0.0 };
            assert!((z.norm() - expect).abs() < 1e-12, "index {i}: {z}");
        }
        fft.inverse(&mut data);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
