//! Seeded random channels and correlation matrices for property sweeps.
//!
//! Each trial draws from its own ChaCha stream keyed by `(seed, trial)`, so
//! results do not depend on evaluation order or thread count.

use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channel::{CovarianceParam, GaussianChannel};
use crate::scalar::Real;

use super::linalg::CMatrix;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex<f64> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// K×M channel with independent uniform phases and per-link SNR uniform in
/// `db_range` (dB).
pub fn random_channel<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    k: usize,
    db_range: (f64, f64),
) -> GaussianChannel<T> {
    let gains = CMatrix::from_fn(k, m, |_, _| {
        let db = rng.random_range(db_range.0..=db_range.1);
        let amp = 10f64.powf(db / 20.0);
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        let g = Complex::from_polar(amp, phase);
        Complex::new(T::lit(g.re), T::lit(g.im))
    });
    GaussianChannel::new(gains).expect("finite random gains")
}

/// Gram matrix of `m` random unit vectors in `C^d`, `d` drawn from `1..=m`.
/// Small `d` gives singular matrices.
pub fn random_correlation<T: Real, R: Rng + ?Sized>(rng: &mut R, m: usize) -> CovarianceParam<T> {
    let d = rng.random_range(1..=m);
    let cols: Vec<Vec<Complex<f64>>> = (0..m)
        .map(|_| {
            let v: Vec<Complex<f64>> = (0..d).map(|_| complex_normal(rng)).collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.into_iter().map(|z| z / norm).collect()
        })
        .collect();
    let matrix = CMatrix::from_fn(m, m, |i, j| {
        if i == j {
            return Complex::new(T::one(), T::zero());
        }
        let dot: Complex<f64> = cols[i].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
        Complex::new(T::lit(dot.re), T::lit(dot.im))
    });
    CovarianceParam::new(matrix).expect("Gram matrix of unit vectors is a correlation matrix")
}

/// Dense matrix with i.i.d. standard complex normal entries.
pub fn random_complex_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix<T> {
    CMatrix::from_fn(rows, cols, |_, _| {
        let z = complex_normal(rng);
        Complex::new(T::lit(z.re), T::lit(z.im))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a: CovarianceParam<f64> = random_correlation(&mut trial_rng(7, 3), 4);
        let b: CovarianceParam<f64> = random_correlation(&mut trial_rng(7, 3), 4);
        let c: CovarianceParam<f64> = random_correlation(&mut trial_rng(7, 4), 4);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn channel_snr_within_range() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..50 {
            let ch: GaussianChannel<f64> = random_channel(&mut rng, 3, 2, (-20.0, 60.0));
            for m in 0..3 {
                for k in 0..2 {
                    let db = 10.0 * ch.snr(m, k).log10();
                    assert!((-20.0 - 1e-9..=60.0 + 1e-9).contains(&db));
                }
            }
        }
    }
}
