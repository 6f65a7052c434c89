//! Seeded random streams. Every random quantity in the crate is drawn from a
//! ChaCha8 stream seeded with `seed_from_u64`, and normal variates come from
//! `rand_distr::StandardNormal`, so results are reproducible per seed.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` independent standard normal variates.
pub fn gaussian_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = seeded(seed);
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}
