//! Seedable, stream-splittable random number plumbing.
//!
//! Parallel Monte Carlo assigns one stream per path so that results are
//! reproducible regardless of thread count or reduction order.  ChaCha8
//! gives platform-independent output and cheap 64-bit stream selection.

use rand_chacha::rand_core::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// A (seed, stream) pair identifying one reproducible random sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    /// The same seed with a different stream id.
    pub fn substream(self, offset: u64) -> Self {
        RngStream {
            seed: self.seed,
            stream_id: self.stream_id.wrapping_add(offset),
        }
    }

    /// Instantiate the generator for this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}
