//! Stable seed derivation.
//!
//! Every random stream in an experiment is seeded from a pure function of the
//! base seed and the coordinates of the thing being sampled, so trials can run
//! in any order or on any number of threads and still draw the same numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a sequence of words into one 64-bit seed. Order-sensitive and stable
/// across platforms and compiler versions.
pub fn derive(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0x6A09_E667_F3BC_C908, |acc, &w| mix64(acc ^ mix64(w)))
}

/// Tags for the per-variable substreams of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Cause = 1,
    Noise = 2,
    Independent = 3,
}

pub fn substream(seed: u64, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(&[seed, stream as u64]))
}
