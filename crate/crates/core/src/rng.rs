//! Seed-deterministic random streams.
//!
//! Every stochastic operation draws from a [`ChaCha8Rng`](rand_chacha::ChaCha8Rng)
//! selected by `(seed, stream)`. Parallel work is cut into fixed-size chunks
//! indexed independently of the worker count, and chunk `k` always reads
//! stream `k`, so results depend only on the seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub type StreamRng = ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 42;

/// Trials per parallel work item.
pub const CHUNK_TRIALS: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Streams {
    seed: u64,
}

impl Streams {
    pub fn new(seed: u64) -> Self {
        Streams { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent generator for work item `index`.
    pub fn stream(&self, index: u64) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// A child family, for nesting one experiment's chunks inside another's.
    pub fn fork(&self, label: u64) -> Streams {
        // splitmix64 finalizer over seed ^ label keeps children decorrelated
        let mut z = self.seed ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        Streams { seed: z }
    }
}

impl Default for Streams {
    fn default() -> Self {
        Streams::new(DEFAULT_SEED)
    }
}

/// Splits `total` trials into `(chunk index, trials in chunk)` pairs.
pub fn chunks(total: u64, chunk: u64) -> impl Iterator<Item = (u64, u64)> + Clone {
    let count = total.div_ceil(chunk);
    (0..count).map(move |k| (k, chunk.min(total - k * chunk)))
}
