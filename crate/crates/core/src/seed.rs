//! Seed derivation. Each sample gets its own generator keyed by
//! `(master seed, sample index)`, so results do not depend on which thread
//! ran which sample.

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for sample `index` under `master`.
pub fn sample_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master) ^ index.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

/// Seed for a named sub-stream (an experiment arm, say) under `master`.
pub fn tagged_seed(master: u64, tag: &str) -> u64 {
    // FNV-1a over the tag bytes.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    mix64(master ^ mix64(h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_differ() {
        assert_ne!(sample_seed(1, 0), sample_seed(1, 1));
        assert_ne!(sample_seed(1, 0), sample_seed(2, 0));
        assert_ne!(tagged_seed(1, "a"), tagged_seed(1, "b"));
        assert_eq!(sample_seed(7, 3), sample_seed(7, 3));
    }
}
