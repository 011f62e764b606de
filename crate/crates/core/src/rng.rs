//! Seed derivation. Every random stream is keyed by (base seed, skeleton
//! index, draw index), so results never depend on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TreeRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(base: u64, skeleton: u64, draw: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(base) ^ skeleton) ^ draw)
}

pub fn seeded_rng(seed: u64) -> TreeRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn stream_rng(base: u64, skeleton: usize, draw: usize) -> TreeRng {
    seeded_rng(derive_seed(base, skeleton as u64, draw as u64))
}
