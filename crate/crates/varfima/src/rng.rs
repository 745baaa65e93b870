//! Deterministic stream derivation for reproducible Monte Carlo runs.
//!
//! Every random path in this crate is keyed: a 64-bit stream seed is derived
//! by mixing the master seed with the path components (cell hash, replication
//! index), then expanded into a ChaCha8 key. Streams are independent of
//! execution order and of the number of worker threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a 64-bit stream seed from a master seed and a path of components.
pub fn stream_seed(master: u64, path: &[u64]) -> u64 {
    let mut s = mix(master ^ 0x6A09_E667_F3BC_C909);
    for &p in path {
        s = mix(s.wrapping_add(GOLDEN) ^ mix(p ^ 0xBB67_AE85_84CA_A73B));
    }
    s
}

/// Expand a 64-bit stream seed into a counter-based generator.
pub fn stream_rng(seed: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut s = seed;
    for chunk in key.chunks_exact_mut(8) {
        s = s.wrapping_add(GOLDEN);
        chunk.copy_from_slice(&mix(s).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Stable FNV-1a hash of a byte stream (used for cell keys; independent of
/// the standard library's hasher, which is not stable across releases).
pub fn fnv1a<I: IntoIterator<Item = u8>>(bytes: I) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}
