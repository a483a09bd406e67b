//! Seed derivation for deterministic substreams.
//!
//! Every random draw in a run descends from one master seed. Per-generation
//! streams (grouping, per-group sampling) get their own seeds derived by
//! hashing (master, generation, index), so results are independent of the
//! order in which subproblems are processed.

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

/// SplitMix64 finalizer; full-period mixing of a 64-bit state.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the seed for substream `index` of generation `generation`.
pub fn substream_seed(master: u64, generation: u64, index: u64) -> u64 {
    mix(mix(mix(master) ^ generation) ^ index)
}

/// RNG for a derived substream.
pub fn substream(master: u64, generation: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(substream_seed(master, generation, index))
}

/// Master RNG for a run.
pub fn master(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
