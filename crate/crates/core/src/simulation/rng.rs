//! Per-replicate random streams.
//!
//! Algorithm: ChaCha8 (`rand_chacha`). The 256-bit key is expanded from the
//! run seed with `SeedableRng::seed_from_u64`, the 64-bit stream id is the
//! replicate index, and each [`StreamRole`] starts at block `role << 60`
//! of that stream. A replicate's draws therefore depend only on
//! `(seed, replicate_index, role)`, never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9): key = seed_from_u64(seed), stream = replicate index, word offset = role << 64";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamRole {
    DenseSignal = 0,
    DenseNoise = 1,
    SecularSignal = 2,
    SecularNoise = 3,
    Goe = 4,
}

pub fn stream(seed: u64, replicate_index: u64, role: StreamRole) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate_index);
    rng.set_word_pos((role as u128) << 64);
    rng
}
