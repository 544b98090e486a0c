//! Seed derivation for reproducible runs.
//!
//! Every random decision in the crate (sampling, network init, mini-batch
//! shuffling) draws from a [`ChaCha8Rng`] seeded through [`derive_seed`], so a
//! run is a pure function of its base seed regardless of thread count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags keep independent consumers of the same base seed decorrelated.
pub mod stream {
    pub const SAMPLE_INTERIOR: u64 = 0x01;
    pub const SAMPLE_BOUNDARY: u64 = 0x02;
    pub const SAMPLE_INTERFACE: u64 = 0x03;
    pub const NETWORK_INIT: u64 = 0x04;
    pub const SHUFFLE: u64 = 0x05;
    pub const TEST_POINTS: u64 = 0x06;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a base seed with a list of stream/index tags into a fresh seed.
pub fn derive_seed(base: u64, tags: &[u64]) -> u64 {
    let mut state = splitmix64(base);
    for &t in tags {
        state = splitmix64(state ^ splitmix64(t));
    }
    state
}

/// A deterministic RNG for the given base seed and tag path.
pub fn rng_for(base: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(base, tags))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_seed_is_stable_and_tag_sensitive() {
        let a = derive_seed(7, &[stream::SAMPLE_INTERIOR, 0]);
        let b = derive_seed(7, &[stream::SAMPLE_INTERIOR, 0]);
        let c = derive_seed(7, &[stream::SAMPLE_INTERIOR, 1]);
        let d = derive_seed(8, &[stream::SAMPLE_INTERIOR, 0]);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }
}
