//! Seeded randomness: per-replica ChaCha streams and counter-keyed
//! Brownian-bridge refinement. Every draw is reproducible from (seed,
//! stream, counters) regardless of worker count or refinement order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// ChaCha stream for one replica: same seed, distinct stream per replica.
pub fn seeded_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Sequential standard-normal source along one stream.
pub struct GaussianWalker {
    rng: ChaCha8Rng,
}

impl GaussianWalker {
    pub fn new(seed: u64, stream: u64) -> Self {
        GaussianWalker { rng: seeded_stream(seed, stream) }
    }

    #[inline]
    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

#[inline]
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash a tuple of counters into one key.
pub(crate) fn counter_key(parts: &[u64]) -> u64 {
    let mut h = 0x243F_6A88_85A3_08D3u64;
    for &p in parts {
        h = splitmix(h ^ p);
    }
    h
}

/// One-shot standard normal keyed by a counter (cold path: bridge midpoints).
pub(crate) fn counter_normal(key: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.sample(StandardNormal)
}

/// Brownian-bridge split of an increment dw over an interval of length h
/// into the two half-interval increments, with the midpoint fluctuation
/// keyed deterministically: left + right == dw exactly, each half has
/// variance h/2 and the halves are conditionally independent.
pub(crate) fn bridge_split(dw: f64, h: f64, key: u64) -> (f64, f64) {
    let xi = 0.5 * h.sqrt() * counter_normal(key);
    (0.5 * dw + xi, 0.5 * dw - xi)
}
