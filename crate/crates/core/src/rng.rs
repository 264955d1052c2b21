//! Replicate seeding.
//!
//! Every replicate owns exactly one ChaCha8 stream. The 256-bit key holds
//! the master seed and the ChaCha stream id holds the replicate index, so
//! `(master_seed, replicate_index)` maps injectively onto streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random source used throughout a replicate.
pub type SimRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamSeed {
    pub key: [u8; 32],
    pub stream: u64,
}

impl StreamSeed {
    pub fn rng(&self) -> SimRng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(self.stream);
        rng
    }
}

pub fn seed_replicate(master_seed: u64, replicate_index: u64) -> StreamSeed {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    StreamSeed { key, stream: replicate_index }
}
