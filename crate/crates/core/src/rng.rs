//! Seeded random streams.
//!
//! Every randomized routine in this crate is generic over [`rand::Rng`], so any
//! source works. Experiments use [`ChaCha8Rng`] because it is seedable and
//! splittable: `stream_rng(seed, stream)` gives independent, reproducible
//! streams for data generation, union sampling and training.
//!
//! The union sampler needs a fixed number of draws per sample, so it uses
//! [`index_draw`] and [`coin_draw`], which each consume exactly one `u64`.

use rand::{Rng, RngCore, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

/// Stream used to generate or ingest the small-bag dataset.
pub const STREAM_DATA: u64 = 0;
/// Stream used to sample union bags.
pub const STREAM_UNION: u64 = 1;
/// Stream used by the trainer (init and mini-batch order).
pub const STREAM_TRAIN: u64 = 2;
/// Stream used by verifiers (random weightings, halfspace draws).
pub const STREAM_VERIFY: u64 = 3;

/// ChaCha8 keyed by `seed` positioned on `stream`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform index in `0..n` from a single `u64` draw (multiply-shift).
///
/// The bias is at most `n / 2^64`, far below anything a test can observe.
#[inline]
pub fn index_draw<R: RngCore + ?Sized>(rng: &mut R, n: usize) -> usize {
    debug_assert!(n > 0);
    ((rng.next_u64() as u128 * n as u128) >> 64) as usize
}

/// Fair coin from a single `u64` draw.
#[inline]
pub fn coin_draw<R: RngCore + ?Sized>(rng: &mut R) -> bool {
    rng.next_u64() >> 63 == 1
}

/// Uniform `f64` in `[0, 1)`.
#[inline]
pub fn unit_f64<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>()
}
