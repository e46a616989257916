//! Seed derivation. A base seed is split into independent named streams
//! (`"environment"`, `"sampler"`, `"game"`, ...) and indexed shards, so adding
//! a consumer never perturbs another consumer's draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3))
}

/// Seed of the stream `name` derived from `base`.
pub fn derive(base: u64, name: &str) -> u64 {
    splitmix64(splitmix64(base) ^ fnv1a(name))
}

/// Seed of the `index`-th shard derived from `base`.
pub fn derive_index(base: u64, index: u64) -> u64 {
    splitmix64(splitmix64(base ^ 0xA5A5_5A5A_C3C3_3C3C).wrapping_add(index))
}

pub fn rng(seed: u64) -> StreamRng {
    StreamRng::seed_from_u64(seed)
}

pub fn named_rng(base: u64, name: &str) -> StreamRng {
    rng(derive(base, name))
}
