//! Deterministic random streams.
//!
//! A scenario carries one master seed. Each Monte-Carlo run derives its own
//! seed from `(master_seed, run_index)` with a pure mixing function, so any
//! run can be replayed in isolation. Within a run every concern (placement,
//! sensing noise, attacks, detector, motion, filtering) draws from its own
//! ChaCha stream; switching one concern on or off never shifts the draws of
//! another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Independent randomness consumers inside one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Concern {
    Placement = 1,
    Sensing = 2,
    AttackerSelection = 3,
    /// Per-agent attack decisions and injected values.
    Attack = 4,
    Detector = 5,
    /// The `r1, r2` coefficients of the velocity update.
    Motion = 6,
    Filtering = 7,
}

/// SplitMix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `run` of a scenario seeded with `master_seed`.
pub fn run_seed(master_seed: u64, run: u64) -> u64 {
    mix64(master_seed ^ mix64(run.wrapping_add(0x9E37_79B9_7F4A_7C15)))
}

/// Factory for the substreams of a single run.
#[derive(Debug, Clone, Copy)]
pub struct RunStreams {
    seed: u64,
}

impl RunStreams {
    pub fn new(run_seed: u64) -> Self {
        Self { seed: run_seed }
    }

    pub fn for_run(master_seed: u64, run: u64) -> Self {
        Self::new(run_seed(master_seed, run))
    }

    pub fn stream(&self, concern: Concern) -> SimRng {
        self.build((concern as u64) << 32)
    }

    /// A stream owned by one agent for one concern.
    pub fn agent_stream(&self, concern: Concern, agent: usize) -> SimRng {
        self.build(((concern as u64) << 32) | (agent as u64 + 1))
    }

    fn build(&self, stream: u64) -> SimRng {
        let mut rng = SimRng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}
