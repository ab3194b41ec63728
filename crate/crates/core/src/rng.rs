//! Deterministic substream derivation for everything randomized.
//!
//! Each (seed, domain, attempt, index) tuple gets its own ChaCha stream, so
//! generation order never depends on loop structure or thread scheduling.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::matrix::ComplexMatrix;
use crate::Complex64;

#[derive(Clone, Copy, Debug)]
pub(crate) enum Domain {
    VectorFrame = 1,
    HsFrame = 2,
    GFrame = 3,
    TestVector = 4,
    DualPerturbation = 5,
    SubsetSample = 6,
    Weights = 7,
    Operator = 8,
}

/// Independent generator for one element of one randomized family.
/// `attempt` separates retries, `index` separates elements.
pub(crate) fn substream(seed: u64, domain: Domain, attempt: u32, index: u32) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let stream = ((domain as u64) << 40) | ((attempt as u64 & 0xff) << 32) | index as u64;
    rng.set_stream(stream);
    rng
}

/// One draw from the standard complex normal distribution (unit second
/// moment: real and imaginary parts are N(0, 1/2)).
pub(crate) fn complex_normal(rng: &mut ChaCha12Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with independent standard complex normal entries, filled in
/// column-major order.
pub(crate) fn gaussian_matrix(rng: &mut ChaCha12Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let entries: Vec<Complex64> = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    ComplexMatrix::from_fn(rows, cols, |i, j| entries[j * rows + i])
}
