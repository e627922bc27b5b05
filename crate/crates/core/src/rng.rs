//! Deterministic, index-addressable uniform streams.
//!
//! Every ensemble member owns one ChaCha8 stream (`stream = member index`)
//! under the run seed. The angle at the prime ideal with enumeration index
//! `i` consumes the single 64-bit word pair at position `i` of that stream,
//! so any angle can be regenerated without replaying the others.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TWO_POW_MINUS_52: f64 = 1.0 / (1u64 << 52) as f64;

/// Maps a raw 64-bit word into the open interval `(0, 1)`; 52 bits keep `x + 0.5` exact.
#[inline]
pub fn unit_open(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * TWO_POW_MINUS_52
}

#[derive(Clone, Debug)]
pub struct AngleStream {
    rng: ChaCha8Rng,
}

impl AngleStream {
    /// Stream for `member` under `seed`, positioned at ideal index 0.
    pub fn new(seed: u64, member: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(member);
        Self { rng }
    }

    /// Stream positioned at the draw belonging to ideal `index`.
    pub fn at(seed: u64, member: u64, index: u64) -> Self {
        let mut s = Self::new(seed, member);
        s.seek(index);
        s
    }

    pub fn seek(&mut self, index: u64) {
        // two 32-bit words per draw
        self.rng.set_word_pos(2 * index as u128);
    }

    /// Next uniform in `(0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        unit_open(self.rng.next_u64())
    }
}

impl RngCore for AngleStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
