//! Deterministic seeding utilities.
//!
//! All randomness in the crate flows from caller-supplied `u64` seeds through
//! ChaCha generators, so identical seeds give identical results on every
//! platform. Named substreams let a pipeline derive independent per-stage
//! (or per-path) generators from one root seed.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// The RNG used throughout the crate.
pub type Rng = ChaCha12Rng;

/// Build a generator from a bare seed.
pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Derive a substream seed from a root seed and a stream label.
///
/// Mixing is SplitMix64 over the root seed and an FNV-1a hash of the label,
/// so distinct labels give statistically independent streams.
pub fn substream_seed(root: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    splitmix64(root ^ h)
}

/// Derive a substream seed from a root seed and a block index
/// (per-path or per-block fan-out).
pub fn indexed_seed(root: u64, index: u64) -> u64 {
    splitmix64(root.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_mul(0x2545_f491_4f6c_dd1d) ^ index.wrapping_mul(0xbf58_476d_1ce4_e5b9))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
