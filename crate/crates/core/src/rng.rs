//! Seeded randomness. The generator is ChaCha8 from `rand_chacha` 0.3; a
//! given seed produces the same stream on every platform.

use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng as SimRng;

pub fn seeded(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Uniform draw in `[0, 1)`.
pub fn uniform(rng: &mut SimRng) -> f64 {
    rng.gen::<f64>()
}

/// Index drawn from a discrete distribution given by its cumulative sums.
pub fn draw_from_cdf(rng: &mut SimRng, cdf: &[f64]) -> usize {
    let total = *cdf.last().unwrap_or(&0.0);
    let u = uniform(rng) * total;
    let i = cdf.partition_point(|&c| c <= u);
    i.min(cdf.len().saturating_sub(1))
}

/// Seed for a sub-task, mixed so neighbouring indices give unrelated streams.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
