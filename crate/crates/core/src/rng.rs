//! Seed derivation.
//!
//! A run has one root 64-bit seed. Every independent consumer of randomness
//! (a trial, a pipeline restart, a generator) draws from its own ChaCha8
//! stream whose key is `mix(root, stream_index)`. Streams do not depend on
//! the order in which they are created, so parallel trials reproduce exactly.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of substream `stream` under `root`.
pub fn mix(root: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(root) ^ stream.wrapping_mul(GOLDEN).rotate_left(17))
}

pub fn stream(root: u64, stream: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(mix(root, stream))
}

/// Well-known stream indices, kept apart so that unrelated consumers never share randomness.
pub mod streams {
    pub const GNP: u64 = 0;
    pub const PARTITION: u64 = 1;
    pub const PIPELINE: u64 = 2;
    pub const TRIALS: u64 = 3;
    pub const EXPERIMENT: u64 = 4;
}
