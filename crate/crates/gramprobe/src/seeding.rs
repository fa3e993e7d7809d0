//! Deterministic sub-seed derivation.
//!
//! Every random decision in an experiment is driven by a seed derived from a
//! recorded base seed plus a stable label, so reruns with the same config are
//! bit-identical and independent stages do not share RNG streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Derive a child seed from a base seed and a label.
pub fn derive_seed(base: u64, label: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(base.to_le_bytes());
    hasher.update(label.as_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

/// Seeded RNG used throughout the crate. ChaCha8's stream is specified, so
/// results are stable across platforms, not just across runs.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_seed_is_stable_and_label_sensitive() {
        let a = derive_seed(7, "corpus");
        let b = derive_seed(7, "corpus");
        let c = derive_seed(7, "split");
        let d = derive_seed(8, "corpus");
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }
}
