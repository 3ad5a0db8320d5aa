//! Seed derivation. Every randomized step draws from a ChaCha stream whose
//! seed is derived from the caller's seed and a step-specific tag, so
//! results do not depend on evaluation order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a list of tags into a base seed.
pub fn derive(seed: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(splitmix(seed), |acc, &t| splitmix(acc ^ splitmix(t)))
}

pub fn rng(seed: u64, tags: &[u64]) -> Rng {
    Rng::seed_from_u64(derive(seed, tags))
}

pub(crate) mod tag {
    pub const BICRITERIA: u64 = 1;
    pub const CELL: u64 = 2;
    pub const CANDIDATES: u64 = 3;
    pub const GUESS: u64 = 4;
    pub const STREAM: u64 = 6;
}
