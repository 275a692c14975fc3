//! Counter-based random streams.
//!
//! A stream is a ChaCha8 keystream: the key is derived from the master seed
//! and a purpose tag, the stream id is the path index and the block counter
//! advances with every draw. Any path can therefore be replayed in isolation,
//! and results do not depend on how paths are scheduled across workers.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Purpose tags separating independent uses of the same master seed.
pub mod purpose {
    pub const EXIT: u64 = 0x4558_4954;
    pub const SECOND_STAGE: u64 = 0x5354_4732;
    pub const TIME: u64 = 0x5449_4d45;
    pub const OCCUPATION: u64 = 0x4f43_4355;
    pub const PROBE: u64 = 0x5052_4f42;
    pub const RESTART: u64 = 0x5253_5452;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct PathRng {
    inner: ChaCha8Rng,
}

impl PathRng {
    pub fn new(master_seed: u64, purpose: u64, path_index: u64) -> Self {
        let key = splitmix64(master_seed ^ splitmix64(purpose));
        let mut inner = ChaCha8Rng::seed_from_u64(key);
        inner.set_stream(path_index);
        PathRng { inner }
    }

    #[inline]
    pub fn normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Position in the keystream, in 32-bit words.
    pub fn word_pos(&self) -> u128 {
        self.inner.get_word_pos()
    }
}

impl RngCore for PathRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
