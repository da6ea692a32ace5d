//! Seed handling. Every random choice in the workspace flows from a 64-bit seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator type used by testers and generators.
pub type Rng = ChaCha8Rng;

/// A generator seeded from a 64-bit value.
pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives the seed of sub-stream `index` from `base` (splitmix64 finalizer).
pub fn split(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
