//! Named random streams derived from a single seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Splits one seed into independent, reproducible streams keyed by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedSplitter {
    seed: u64,
}

impl SeedSplitter {
    pub fn new(seed: u64) -> Self {
        SeedSplitter { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Stream for a sampling site; the same name always yields the same stream.
    pub fn stream(&self, name: &str) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(fnv1a(name.as_bytes()));
        rng
    }

    /// Stream for the `index`-th trial of a sampling site.
    pub fn trial(&self, name: &str, index: u64) -> ChaCha8Rng {
        let mut rng = self.stream(name);
        rng.set_word_pos((index as u128) << 20);
        rng
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
