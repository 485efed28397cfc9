//! Small deterministic hashing helpers shared by the drop coin and the Bloom filter.

/// One round of the splitmix64 finalizer.
#[inline]
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Hashes a sequence of words into one 64-bit value.
pub fn hash_words(seed: u64, words: &[u64]) -> u64 {
    let mut h = splitmix64(seed);
    for &w in words {
        h = splitmix64(h ^ w);
    }
    h
}

/// Maps a hash to a uniform float in [0, 1).
#[inline]
pub fn unit_interval(h: u64) -> f64 {
    (h >> 11) as f64 / (1u64 << 53) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_interval_stays_in_range() {
        for i in 0..1000u64 {
            let u = unit_interval(hash_words(7, &[i]));
            assert!((0.0..1.0).contains(&u));
        }
        assert!(unit_interval(u64::MAX) < 1.0);
    }

    #[test]
    fn hashing_is_deterministic_and_order_sensitive() {
        assert_eq!(hash_words(1, &[2, 3]), hash_words(1, &[2, 3]));
        assert_ne!(hash_words(1, &[2, 3]), hash_words(1, &[3, 2]));
        assert_ne!(hash_words(1, &[2, 3]), hash_words(2, &[2, 3]));
    }
}
