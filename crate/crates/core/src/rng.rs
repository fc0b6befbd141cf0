//! Seeded randomness. Every stage draws from its own named substream of the
//! user seed so that adding or reordering work elsewhere cannot shift it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

fn fnv1a(label: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub fn substream(seed: u64, label: &str) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(label));
    rng
}

/// Substream indexed by a label and an integer (path number, retry, sample).
pub fn substream_n(seed: u64, label: &str, n: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n.wrapping_mul(0x9e3779b97f4a7c15));
    rng.set_stream(fnv1a(label));
    rng
}
