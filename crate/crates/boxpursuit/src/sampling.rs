//! Gaussian measurement matrices and random finite-alphabet signals.

use crate::alphabet::{Alphabet, Signal, SupportProfile};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

/// An m×N matrix with i.i.d. N(0, 1/m) entries (standard normal draws
/// scaled by m^{-1/2}). Entries are drawn in row-major order, so the
/// stream position of every entry is fixed.
pub fn sample_gaussian_matrix<R: Rng>(rng: &mut R, m: usize, n: usize) -> DMatrix<f64> {
    assert!(m >= 1 && n >= 1, "matrix dimensions must be positive");
    let scale = 1.0 / (m as f64).sqrt();
    let mut a = DMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            let g: f64 = rng.sample(StandardNormal);
            a[(i, j)] = g * scale;
        }
    }
    a
}

/// Places the profile's level counts on uniformly random coordinates
/// (without replacement). The output has exactly `profile.count(l)`
/// coordinates at level `l` for every nonzero level.
pub fn sample_signal<R: Rng>(
    rng: &mut R,
    alphabet: &Alphabet,
    profile: &SupportProfile,
) -> Signal {
    let n = profile.n();
    let mut levels = Vec::with_capacity(n);
    for (level, count) in profile.nonzero_counts() {
        debug_assert!(alphabet.contains(level));
        levels.extend(std::iter::repeat(level).take(count));
    }
    levels.resize(n, 0);
    levels.shuffle(rng);
    Signal::new(levels)
}
