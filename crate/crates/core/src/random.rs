//! Seeded random streams and random quantum states.
//!
//! Every stochastic routine draws from a ChaCha8 stream keyed by `(seed, purpose)`
//! with the 64-bit ChaCha stream id set to a caller-chosen index (restart number,
//! Monte Carlo block, sample number). Streams are independent of scheduling, so
//! results do not depend on how work is split across threads.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::DensityMatrix;
use crate::matrix::{self, ComplexMatrix};

pub type StreamRng = ChaCha8Rng;

/// Purpose tag mixed into the stream key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Search = 1,
    Seesaw = 2,
    Dominance = 3,
    MonteCarlo = 4,
    Measurement = 5,
    InputSearch = 6,
    ProductSearch = 7,
    Test = 0xfeed,
}

pub fn stream(seed: u64, purpose: Stream, index: u64) -> StreamRng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(purpose as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::new(rows, cols, data).expect("sized")
}

/// Haar-random pure state: a normalized vector of standard complex Gaussians.
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let n = matrix::norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}

/// Full-rank random mixed state `G G^H / tr(G G^H)` with Gaussian `G`.
pub fn mixed_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = gaussian_matrix(rng, dim, dim);
    let w = &g * &g.adjoint();
    let t = w.trace().re;
    DensityMatrix::new(w.scale_real(1.0 / t)).expect("Wishart matrices are valid states")
}

/// Angles drawn uniformly from `[0, 2 pi)`.
pub fn angles<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<f64> {
    (0..count)
        .map(|_| rng.random::<f64>() * core::f64::consts::TAU)
        .collect()
}
