//! Seed derivation. Every random stream in the crate is a ChaCha8 generator keyed by a master
//! seed plus a purpose tag, so independent components never share state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a sub-seed from a master seed and a sequence of stream identifiers.
pub fn derive_seed(seed: u64, stream: &[u64]) -> u64 {
    stream.iter().fold(mix(seed), |acc, s| mix(acc ^ mix(*s)))
}

pub fn stream(seed: u64, ids: &[u64]) -> Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, ids))
}

/// Stream tags.
pub mod tag {
    pub const TEMPLATE: u64 = 1;
    pub const TRAIN_NOISE: u64 = 2;
    pub const TEST_NOISE: u64 = 3;
    pub const SUBSET: u64 = 4;
    pub const INIT_G: u64 = 5;
    pub const INIT_D: u64 = 6;
    pub const SHUFFLE: u64 = 7;
    pub const LATENT: u64 = 8;
    pub const DUMP: u64 = 9;
}
