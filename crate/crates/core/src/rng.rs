//! Seeded random streams.
//!
//! Every random draw in the crate comes from ChaCha8 (`rand_chacha::ChaCha8Rng`)
//! seeded through `SeedableRng::seed_from_u64`. Normal variates use
//! `rand_distr::StandardNormal` (ziggurat method) scaled by σ. Both are
//! value-stable across platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer. A bijection on `u64`.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn mix_is_injective_on_a_block() {
        let out: HashSet<u64> = (0..100_000u64).map(mix64).collect();
        assert_eq!(out.len(), 100_000);
    }
}
