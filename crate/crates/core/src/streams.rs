//! Per-trial random substreams.
//!
//! Trial `i` of a run seeded with `s` always reads ChaCha8 stream `i` keyed by
//! `s`, whichever worker evaluates it. Results therefore do not depend on how
//! trials are partitioned across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct TrialStreams {
    base: ChaCha8Rng,
}

impl TrialStreams {
    pub fn new(seed: u64) -> Self {
        Self {
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn trial(&self, index: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        rng
    }
}
