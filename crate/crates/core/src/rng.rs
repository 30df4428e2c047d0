//! Per-path Gaussian noise derived from a master seed.
//!
//! Every path owns a ChaCha8 stream selected by its index, so a path's
//! variates depend only on `(master_seed, path_index)` and never on how
//! paths are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone)]
pub struct NoiseStream {
    master_seed: u64,
    stream: u64,
    counter: u64,
    rng: ChaCha8Rng,
}

impl NoiseStream {
    pub fn new(master_seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream);
        Self {
            master_seed,
            stream,
            counter: 0,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Number of variates drawn so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Next standard normal variate.
    #[inline]
    pub fn gaussian(&mut self) -> f64 {
        self.counter += 1;
        self.rng.sample(StandardNormal)
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.gaussian();
        }
    }
}
