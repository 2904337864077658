//! Seed splitting and state hashing.
//!
//! A seed is expanded into independent ChaCha streams keyed by a tag, so
//! drawing from the render stream can never shift the dynamics stream.

use core::hash::{Hash, Hasher};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    /// Instance generation and stochastic transitions.
    Dynamics,
    /// Visual choices that never affect hidden state.
    Render,
    /// Reserved for agents that sample actions.
    Agent,
}

impl Stream {
    fn tag(self) -> &'static [u8] {
        match self {
            Stream::Dynamics => b"dynamics",
            Stream::Render => b"render",
            Stream::Agent => b"agent",
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the 256-bit key of one stream from `(seed, tag, salt)`.
pub fn stream_key(seed: u64, stream: Stream, salt: u64) -> [u8; 32] {
    let mut h = Fnv64::default();
    h.write(stream.tag());
    h.write_u64(salt);
    let tag_hash = h.finish();
    let mut state = seed ^ tag_hash.rotate_left(17);
    let mut key = [0u8; 32];
    for chunk in key.chunks_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    key
}

pub fn stream_rng(seed: u64, stream: Stream, salt: u64) -> StreamRng {
    ChaCha8Rng::from_seed(stream_key(seed, stream, salt))
}

/// FNV-1a, 64 bit. Stable across platforms and releases, unlike `DefaultHasher`.
#[derive(Debug, Clone)]
pub struct Fnv64(u64);

impl Default for Fnv64 {
    fn default() -> Self {
        Fnv64(0xcbf2_9ce4_8422_2325)
    }
}

impl Hasher for Fnv64 {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.0 ^= u64::from(*b);
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }

    // integers are hashed little-endian regardless of target
    fn write_usize(&mut self, i: usize) {
        self.write(&(i as u64).to_le_bytes());
    }
    fn write_u16(&mut self, i: u16) {
        self.write(&i.to_le_bytes());
    }
    fn write_u32(&mut self, i: u32) {
        self.write(&i.to_le_bytes());
    }
    fn write_u64(&mut self, i: u64) {
        self.write(&i.to_le_bytes());
    }
    fn write_i32(&mut self, i: i32) {
        self.write(&i.to_le_bytes());
    }
    fn write_i64(&mut self, i: i64) {
        self.write(&i.to_le_bytes());
    }
}

pub fn stable_hash<T: Hash + ?Sized>(value: &T) -> u64 {
    let mut h = Fnv64::default();
    value.hash(&mut h);
    h.finish()
}
