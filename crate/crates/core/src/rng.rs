//! Counter-based random streams.
//!
//! Every random draw in the crate comes from a stream addressed by
//! `(seed, domain, index)`. Streams are independent ChaCha8 keystreams, so a
//! replication's randomness does not depend on which thread runs it or in
//! what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Separates the uses of one master seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Realization = 1,
    HitMiss = 2,
    MissOracle = 3,
    Experiment = 4,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for stream `index` of `domain` under `seed`.
pub fn stream(seed: u64, domain: Domain, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
        let word = splitmix(seed ^ splitmix(domain as u64 + ((i as u64) << 32)));
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Derives a child seed, e.g. one per grid width of an experiment.
pub fn child_seed(seed: u64, domain: Domain, index: u64) -> u64 {
    splitmix(splitmix(seed ^ (domain as u64).rotate_left(48)) ^ index)
}
