use akin::OrientationSpectrum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::InitialDatum;

/// One round of the SplitMix64 output function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of sweep task `index`, independent of scheduling order.
pub fn task_seed(global: u64, index: usize) -> u64 {
    splitmix64(splitmix64(global) ^ index as u64)
}

/// Random spectrum with `|ĥ_m| ≤ √2/(1+m²)`.
pub fn random_spectrum(order: usize, seed: u64) -> OrientationSpectrum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m_max = order as i64;
    let coeffs = (-m_max..=m_max)
        .map(|m| {
            let a = 1.0 / (1.0 + (m * m) as f64);
            Complex64::new(rng.gen_range(-a..=a), rng.gen_range(-a..=a))
        })
        .collect();
    OrientationSpectrum::from_coeffs(coeffs).expect("odd coefficient count")
}

pub fn initial_datum(kind: InitialDatum, order: usize, seed: u64) -> OrientationSpectrum {
    match kind {
        InitialDatum::Sin2 => {
            OrientationSpectrum::from_fn(order, |t| Complex64::from((2.0 * t).sin()))
        }
        InitialDatum::Enhanced => {
            OrientationSpectrum::from_fn(order, |t| Complex64::from(t.cos() + (2.0 * t).sin()))
        }
        InitialDatum::Taylor => {
            OrientationSpectrum::from_fn(order, |t| 1.0 + Complex64::from_polar(1.0, t))
        }
        InitialDatum::Random => random_spectrum(order, seed),
    }
}
