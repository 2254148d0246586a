//! Per-trial random streams.
//!
//! A trial owns one seed. Every consumer of randomness (the replacement
//! draw, the uniform pair, the coin, the order bit, the adversary, junta
//! selection) gets its own generator derived from that seed and a fixed
//! stream tag, so adding or removing draws from one consumer never shifts
//! the values seen by another.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub type StreamRng = Xoshiro256PlusPlus;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Replacement = 1,
    UniformPair = 2,
    Coin = 3,
    Order = 4,
    Adversary = 5,
    Junta = 6,
    Oracle = 7,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic generator for `stream` of the trial seeded with `seed`.
pub fn stream(seed: u64, stream: Stream) -> StreamRng {
    let mixed = splitmix64(seed ^ splitmix64(stream as u64));
    StreamRng::seed_from_u64(mixed)
}

/// Fair bits drawn 64 at a time from a dedicated stream.
#[derive(Debug, Clone)]
pub struct BitSource {
    rng: StreamRng,
    buf: u64,
    left: u32,
}

impl BitSource {
    pub fn new(rng: StreamRng) -> Self {
        Self { rng, buf: 0, left: 0 }
    }

    #[inline]
    pub fn next_bit(&mut self) -> bool {
        if self.left == 0 {
            self.buf = self.rng.random();
            self.left = 64;
        }
        let bit = self.buf & 1 == 1;
        self.buf >>= 1;
        self.left -= 1;
        bit
    }
}
