//! Seeded random instances.
//!
//! Every stream is a ChaCha8 generator keyed by `(seed, stream)`, so a trial
//! can be regenerated from its index alone.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{ComplexMatrix, C64};
use crate::multiplicative::ScalingVector;

pub type SeededRng = ChaCha8Rng;

/// Independent generator for trial `stream` under `seed`.
pub fn seeded_rng(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex Gaussian: real and imaginary parts iid `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<C64> {
    (0..len).map(|_| complex_gaussian(rng)).collect()
}

/// Uniform point on the unit circle.
pub fn unimodular<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.random::<f64>() * TAU)
}

/// Scaling with moduli log-uniform in `[1/spread, spread]` and uniform phases.
pub fn random_scaling<R: Rng + ?Sized>(rng: &mut R, n: usize, spread: f64) -> ScalingVector {
    let log_spread = spread.ln();
    let values = (0..n)
        .map(|_| {
            let modulus = (rng.random_range(-1.0..=1.0) * log_spread).exp();
            C64::from_polar(modulus, rng.random::<f64>() * TAU)
        })
        .collect();
    ScalingVector::new(values).expect("moduli are positive")
}

/// Scaling whose entries all have modulus one.
pub fn random_unimodular_scaling<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ScalingVector {
    ScalingVector::new((0..n).map(|_| unimodular(rng)).collect()).expect("unimodular entries are nonzero")
}

/// Random labelled tree on `n` vertices as 0-based edges `(parent, child)`:
/// vertices are visited in a random order and each attaches to a uniformly
/// chosen earlier one.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    (1..n).map(|k| (order[rng.random_range(0..k)], order[k])).collect()
}
